import math

import pytest
from hypothesis import given, settings, strategies as st

from contact_surgery.dividing import parse_forest, relative_euler
from contact_surgery.errors import (
    KnotNotFound, LedgerError, NotPreLagrangian, TargetParityMismatch,
)
from contact_surgery.lutz import (
    adjust_relative_euler, full_lutz_knot, lutz_as_round_surgeries, lutz_torus,
    simple_lutz_knot, torsion_lower_bound,
)
from contact_surgery.slope_calc import (
    HALF_PI, HALF_TURN, QUARTER_PI, THREE_QUARTER_PI, BasisChange, Slope,
    TwistAngle, extend_to_basis,
)
from contact_surgery.surgery import (
    SolidTorus, ThickenedTorus, approximate_transverse, canonical_form,
    check_ledger, declare_torus, radial_chains, reverse, round_surgery_1,
    round_surgery_2, standard_sphere, state_json,
)


def window_framing(s):
    """A framing taking slope -1 in the knot's frame to ambient slope s."""
    c, a = extend_to_basis((s.q, s.p))  # a*q - c*p = 1
    g = BasisChange(a, s.p + a, c, s.q + c)
    assert Slope(*g.apply(-1, 1)) == s
    return g


def knot_at(angle=QUARTER_PI, framing=BasisChange(1, 0, 0, 1)):
    p, _ = approximate_transverse(standard_sphere(), "K", angle, framing)
    return p


def model(framing=BasisChange(1, 0, 0, 1)):
    p, _ = declare_torus(knot_at(QUARTER_PI, framing), "T", at="K", meridian=(0, 1))
    return p


def knot_piece(p, name="K"):
    return p.pieces[p.knot(name).piece]


class TestKnotTwists:
    def test_simple(self):
        p = simple_lutz_knot(knot_at(QUARTER_PI), "K")
        assert knot_piece(p).twist_end == TwistAngle(1, Slope(-1, 1))
        c = p.counters
        assert (c.simple_lutz_count, c.torsion_half_units, c.overtwisted) == (1, 1, True)
        check_ledger(p)

    @given(st.integers(-50, -1), st.integers(1, 50))
    def test_slope_is_preserved(self, a, b):
        p = knot_at(TwistAngle(0, Slope(a, b)))
        before = knot_piece(p).twist_end.s
        assert knot_piece(simple_lutz_knot(p, "K")).twist_end.s == before

    def test_full(self):
        p = full_lutz_knot(knot_at(QUARTER_PI), "K")
        assert knot_piece(p).twist_end == TwistAngle(2, Slope(-1, 1))
        assert p.counters.torsion_half_units == 2
        assert p.counters.simple_lutz_count == 2
        twice = simple_lutz_knot(simple_lutz_knot(knot_at(QUARTER_PI), "K"), "K")
        assert state_json(p) == state_json(twice)

    def test_full_torsion_matches_scanner(self):
        p = full_lutz_knot(knot_at(QUARTER_PI), "K")
        assert torsion_lower_bound(p) == 2

    def test_missing_knot(self):
        with pytest.raises(KnotNotFound):
            simple_lutz_knot(standard_sphere(), "K")


class TestTorusTwists:
    def test_layer_window(self):
        p = lutz_torus(model(), "T", 1)
        layers = [x for x in p.pieces.values() if isinstance(x, ThickenedTorus)]
        assert len(layers) == 1
        assert (layers[0].twist_lo, layers[0].twist_hi) == (QUARTER_PI, TwistAngle(1, Slope(-1, 1)))
        assert layers[0].twist_lo.s == layers[0].twist_hi.s
        assert p.counters.torsion_half_units == 1
        assert p.counters.torus_lutz_count == 1 and p.counters.simple_lutz_count == 0
        check_ledger(p)

    def test_two_half_turns(self):
        p = lutz_torus(model(), "T", 2)
        assert torsion_lower_bound(p) >= 2

    def test_embedded_torus(self):
        p, _ = declare_torus(standard_sphere(), "T", slope=Slope(1, 2))
        p = lutz_torus(p, "T", 1)
        check_ledger(p)
        assert not p.counters.overtwisted
        assert torsion_lower_bound(p) == 1

    def test_not_pre_lagrangian(self):
        p, _ = declare_torus(standard_sphere(), "T", forest=parse_forest("0:{-}, 1:{+}", 1))
        with pytest.raises(NotPreLagrangian):
            lutz_torus(p, "T", 1)

    def test_standard_sphere_has_no_torsion(self):
        assert torsion_lower_bound(standard_sphere()) == 0

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.sampled_from(["knot", "torus", "lutz_knot", "lutz_torus"]), max_size=12))
    def test_bound_never_decreases_under_lutz(self, moves):
        p = standard_sphere()
        bound = 0
        for i, move in enumerate(moves):
            knots = sorted(n for n, r in p.tracked.items() if r.kind == "knot")
            tori = sorted(n for n, r in p.tracked.items() if r.kind == "torus")
            if move == "knot" or not knots:
                p, _ = approximate_transverse(p, f"K{i}", QUARTER_PI)
            elif move == "torus":
                p, _ = declare_torus(p, f"T{i}", slope=Slope(i, 1))
            elif move == "lutz_knot":
                p = simple_lutz_knot(p, knots[-1])
            elif tori:
                p = lutz_torus(p, tori[0], 1)
            new = torsion_lower_bound(p)
            assert new >= bound
            bound = new


class TestMacro:
    def test_four_events_and_equivalence(self):
        p = model()
        q, events = lutz_as_round_surgeries(p, "T")
        assert [e.index for e in events] == [2, 1, 2, 1]
        assert canonical_form(q) == canonical_form(lutz_torus(p, "T", 1))
        check_ledger(q)

    def test_glued_tori_of_the_first_surgery(self):
        q, events = lutz_as_round_surgeries(model(), "T")
        first = events[0]
        added = {x.id: x for x in first.added}
        assert added[first.site["N1"]].twist_end == THREE_QUARTER_PI
        assert added[first.site["N2"]].twist_end == QUARTER_PI

    def test_half_way_layer(self):
        q, events = lutz_as_round_surgeries(model(), "T")
        # after (1)+(2) the layer left in N1 runs from pi/4 to 3pi/4
        second = events[1]
        left = [x for x in q.events if x.no < second.no and x.kind == "declare"][-2]
        w1 = [x for x in left.added if isinstance(x, ThickenedTorus)][0]
        assert (w1.twist_lo, w1.twist_hi) == (QUARTER_PI, THREE_QUARTER_PI)
        assert w1.span() == HALF_PI

    def test_final_layer_spans_half_turn(self):
        q, _ = lutz_as_round_surgeries(model(), "T")
        joint = [j for j in canonical_form(q)["joints"] if "layer" in j]
        assert len(joint) == 1
        assert '"layer": ["0*pi+0", "1*pi+0"]' in joint[0]
        spans = [total for ids, total in radial_chains(q) if len(ids) > 1]
        assert max(spans) == HALF_TURN + QUARTER_PI

    def test_counters(self):
        p = model()
        q, _ = lutz_as_round_surgeries(p, "T")
        direct = lutz_torus(p, "T", 1)
        assert q.counters.torsion_half_units == direct.counters.torsion_half_units == 1
        assert q.counters.simple_lutz_count == 1
        assert torsion_lower_bound(q) == torsion_lower_bound(direct) >= 1

    def test_wrong_window(self):
        p, _ = declare_torus(knot_at(THREE_QUARTER_PI), "T", at="K", meridian=(0, 1))
        with pytest.raises(LedgerError):
            lutz_as_round_surgeries(p, "T")

    def test_farey_grid(self):
        # every torus slope of Farey level <= 3, brought to the window by a framing
        slopes = {Slope(p, q) for q in range(0, 4) for p in range(-3 * max(q, 1), 3 * max(q, 1) + 1)
                  if (p, q) != (0, 0) and math.gcd(p, q) == 1}
        for s in sorted(slopes, key=lambda x: (x.q, x.p)):
            g = window_framing(s)
            p = model(g)
            assert p.interfaces[p.torus("T").iface].slope_at(("P0", "K")) == s
            q, events = lutz_as_round_surgeries(p, "T")
            assert len(events) == 4
            assert canonical_form(q) == canonical_form(lutz_torus(p, "T", 1))

    def test_reversible(self):
        p = model()
        q, _ = lutz_as_round_surgeries(p, "T")
        for no in range(len(q.events), len(p.events), -1):
            q = reverse(q, no)
        assert state_json(q) == state_json(p)


def non_separating(forest):
    p, _ = declare_torus(standard_sphere(), "T", separating=False, meridian=(0, 1),
                         forest=parse_forest(forest, 1) if forest else None)
    return p


class TestAdjustEuler:
    def test_positive(self):
        p = non_separating("1:{+}")
        assert relative_euler(p.torus("T").ds) == 2
        q = adjust_relative_euler(p, "T")
        assert relative_euler(q.torus("T").ds) == 0
        assert q.counters.simple_lutz_count == 1

    def test_negative(self):
        p = non_separating("0:{- -}")
        q = adjust_relative_euler(p, "T")
        assert relative_euler(q.torus("T").ds) == 0
        assert q.counters.simple_lutz_count == 2

    def test_noop(self):
        p = non_separating("")
        assert adjust_relative_euler(p, "T") is p

    def test_parity(self):
        with pytest.raises(TargetParityMismatch):
            adjust_relative_euler(non_separating("1:{+}"), "T", target=1)

    def test_then_surgery_is_admissible(self):
        q = adjust_relative_euler(non_separating("1:{+ +}"), "T")
        r = round_surgery_2(q, "T")
        assert r.events[-1].trace
        check_ledger(r)

    @pytest.mark.parametrize("value", range(-6, 7, 2))
    def test_steps_of_two(self, value):
        forest = "1:{" + " ".join("+" * 1 for _ in range(value // 2)) + "}" if value > 0 else (
            "0:{" + " ".join("-" for _ in range(-value // 2)) + "}" if value < 0 else "")
        p = non_separating(forest)
        assert relative_euler(p.torus("T").ds) == value
        q = adjust_relative_euler(p, "T")
        twists = [e for e in q.events[len(p.events):] if e.kind == "lutz"]
        assert len(twists) == abs(value) // 2
        seq = [value]
        for e in twists:
            ds = dict((n, a) for n, b, a in e.tracked)["T"].ds
            seq.append(relative_euler(ds))
            assert (ds.pairs, ds.slope) == (p.torus("T").ds.pairs, p.torus("T").ds.slope)
        assert all(b - a == (-2 if value > 0 else 2) for a, b in zip(seq, seq[1:]))
        assert seq[-1] == 0


def test_rsurg1_after_lutz_is_recorded():
    p, _ = approximate_transverse(knot_at(QUARTER_PI), "J", QUARTER_PI)
    p = simple_lutz_knot(p, "K")
    p = round_surgery_1(p, "K", "J")
    assert isinstance(next(iter(e for e in p.events[-1].removed)), SolidTorus)
