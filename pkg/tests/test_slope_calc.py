import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from contact_surgery.slope_calc import (
    ANGLE_ZERO, HALF_PI, IDENTITY, INF, QUARTER_PI, THREE_QUARTER_PI, ZERO,
    BasisChange, Slope, TwistAngle, add_half_turn, angle_for_slope,
    angle_of_pi_multiple, change_basis, compare_angles, extend_to_basis,
    first_angle_with_slope, slope_of_angle,
)
from oracles import angle_value


@st.composite
def slope_st(draw):
    p = draw(st.integers(-30, 30))
    q = draw(st.integers(-30, 30))
    if p == 0 and q == 0:
        q = 1
    return Slope(p, q)


angles = st.builds(TwistAngle, st.integers(-4, 4), slope_st())


UNIMODULAR = [BasisChange(a, b, c, d)
              for a in range(-3, 4) for b in range(-3, 4)
              for c in range(-3, 4) for d in range(-3, 4) if a * d - b * c in (1, -1)]
basis_st = lambda: st.sampled_from(UNIMODULAR)  # noqa: E731


def farey(level):
    out = {INF}
    for q in range(1, level + 1):
        for p in range(-level * q, level * q + 1):
            if math.gcd(p, q) == 1:
                out.add(Slope(p, q))
    return sorted(out, key=lambda s: (s.q, s.p))


class TestSlope:
    def test_normalization(self):
        assert Slope(2, 4) == Slope(1, 2)
        assert Slope(-3, -6) == Slope(1, 2)
        assert Slope(3, -6) == Slope(-1, 2)
        assert Slope(-5, 0) == INF
        with pytest.raises(ValueError):
            Slope(0, 0)

    @given(slope_st())
    def test_normalization_idempotent(self, s):
        again = Slope(s.p, s.q)
        assert again == s
        assert math.gcd(s.p, s.q) == 1 and s.q >= 0
        if s.q == 0:
            assert s.p == 1

    def test_parse(self):
        assert Slope.parse("-1") == Slope(-1, 1)
        assert Slope.parse("inf") == INF
        assert Slope.parse("3/-6") == Slope(-1, 2)


class TestSlopeOfAngle:
    def test_examples(self):
        assert slope_of_angle(angle_of_pi_multiple(Fraction(1, 4))) == Slope(-1, 1)
        assert slope_of_angle(angle_of_pi_multiple(1)) == ZERO
        assert slope_of_angle(angle_of_pi_multiple(Fraction(1, 2))) == INF

    @pytest.mark.parametrize("k", range(-8, 9))
    def test_matches_minus_tan(self, k):
        t = angle_of_pi_multiple(Fraction(k, 4))
        assert t.as_float() == pytest.approx(k * math.pi / 4)
        expected = -math.tan(k * math.pi / 4)
        s = slope_of_angle(t)
        if s.q == 0:
            assert abs(expected) > 1e10
        else:
            assert s.p / s.q == pytest.approx(expected, abs=1e-9)

    @given(angles)
    def test_pi_periodic(self, t):
        assert slope_of_angle(add_half_turn(t, 1)) == slope_of_angle(t)


class TestAddHalfTurn:
    def test_examples(self):
        assert add_half_turn(TwistAngle(0, Slope(-1, 1)), 1) == TwistAngle(1, Slope(-1, 1))
        assert add_half_turn(ANGLE_ZERO, 2) == TwistAngle(2, ZERO)

    @given(angles, st.integers(1, 5), st.integers(1, 5))
    def test_additive_and_increasing(self, t, j, k):
        assert add_half_turn(add_half_turn(t, j), k) == add_half_turn(t, j + k)
        assert add_half_turn(t, k) > t


class TestChangeBasis:
    def test_examples(self):
        assert change_basis(ZERO, IDENTITY) == ZERO
        # swap: (-1, 1) -> (1, -1) ~ (-1, 1)
        assert change_basis(Slope(-1, 1), BasisChange(0, 1, 1, 0)) == Slope(-1, 1)
        # (1, 0) -> (1*1 + 0*0, 1*1 + 1*0) = (1, 1)
        assert change_basis(INF, BasisChange(1, 0, 1, 1)) == Slope(1, 1)

    def test_rejects_non_unimodular(self):
        with pytest.raises(ValueError):
            BasisChange(2, 0, 0, 1)

    @given(slope_st(), basis_st(), basis_st())
    def test_group_action(self, s, g, h):
        assert change_basis(s, g @ h) == change_basis(change_basis(s, h), g)
        assert change_basis(change_basis(s, g), g.inverse()) == s
        assert change_basis(s, IDENTITY) == s


class TestAngleForSlope:
    def test_examples(self):
        assert angle_for_slope(Slope(-1, 1), 0) == QUARTER_PI
        assert angle_for_slope(ZERO, 0) == ANGLE_ZERO
        assert ANGLE_ZERO.as_float() == 0

    @pytest.mark.parametrize("n", [0, 1, 3])
    def test_round_trip_farey_5(self, n):
        for s in farey(5):
            t = angle_for_slope(s, n)
            assert slope_of_angle(t) == s and t.n == n


class TestCompare:
    def test_examples(self):
        assert compare_angles(TwistAngle(0, Slope(-1, 1)), TwistAngle(1, Slope(-1, 1))) == -1
        assert compare_angles(TwistAngle(0, Slope(-1, 1)), TwistAngle(0, ZERO)) == 1
        assert compare_angles(QUARTER_PI, QUARTER_PI) == 0

    @given(angles, angles)
    def test_agrees_with_real_values(self, a, b):
        va, vb = angle_value(a.n, a.s.p, a.s.q), angle_value(b.n, b.s.p, b.s.q)
        c = compare_angles(a, b)
        if c == 0:
            assert a == b
        elif abs(va - vb) > 1e-12:
            assert c == (-1 if va < vb else 1)

    @given(angles, angles, angles)
    def test_total_order(self, a, b, c):
        assert compare_angles(a, a) == 0
        assert compare_angles(a, b) == -compare_angles(b, a)
        if a <= b and b <= c:
            assert a <= c

    def test_thousand_random_pairs(self):
        import random
        rng = random.Random(1729)
        for _ in range(1000):
            pairs = []
            for _ in range(2):
                p, q = rng.randint(-50, 50), rng.randint(0, 50)
                if p == 0 and q == 0:
                    q = 1
                pairs.append(TwistAngle(rng.randint(0, 3), Slope(p, q)))
            a, b = pairs
            va, vb = angle_value(a.n, a.s.p, a.s.q), angle_value(b.n, b.s.p, b.s.q)
            if a == b:
                continue
            assert (a < b) == (va < vb)


class TestAngleArithmetic:
    @given(angles, angles)
    def test_addition_matches_reals(self, a, b):
        assert (a + b).as_float() == pytest.approx(a.as_float() + b.as_float(), abs=1e-9)

    @given(angles)
    def test_negation(self, a):
        assert (-a).as_float() == pytest.approx(-a.as_float(), abs=1e-9)
        assert a - a == ANGLE_ZERO

    @given(angles)
    def test_floor(self, a):
        assert a.half_turns_floor() == math.floor(a.as_float() / math.pi + 1e-12)

    def test_model_spans(self):
        assert THREE_QUARTER_PI - QUARTER_PI == HALF_PI
        assert HALF_PI + HALF_PI == angle_of_pi_multiple(1)
        assert THREE_QUARTER_PI == TwistAngle(1, Slope(1, 1))

    def test_first_angle_with_slope(self):
        assert first_angle_with_slope(Slope(1, 1)) == THREE_QUARTER_PI
        assert first_angle_with_slope(ZERO) == TwistAngle(1, ZERO)
        assert first_angle_with_slope(Slope(-1, 1)) == QUARTER_PI


@given(st.integers(-20, 20), st.integers(-20, 20))
def test_extend_to_basis(a, b):
    if math.gcd(a, b) != 1:
        return
    u, v = extend_to_basis((a, b))
    assert a * v - b * u == 1


def test_extend_lambda_gives_minus_mu():
    assert extend_to_basis((0, 1)) == (-1, 0)
