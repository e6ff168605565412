import pytest
from hypothesis import given, settings, strategies as st

from contact_surgery.dividing import parse_forest, relative_euler
from contact_surgery.errors import (
    EulerObstruction, EventNotReversibleHere, FramingMismatch, KnotNotFound,
    KnotsNotDisjoint, LedgerError, NoMeridian,
)
from contact_surgery.experiments import RandomScriptConfig, random_presentation, reverse_all
from contact_surgery.slope_calc import (
    DEFAULT_KNOT_ANGLE, HALF_TURN, QUARTER_PI, THREE_QUARTER_PI, BasisChange,
    Slope, TwistAngle,
)
from contact_surgery.surgery import (
    Opaque, SolidTorus, ThickenedTorus, approximate_transverse, canonical_form,
    check_ledger, declare_torus, glued_solid_tori, invariant_report,
    meridian_frame, reverse, round_surgery_1, round_surgery_2, standard_sphere,
    state_json,
)


def two_knots(angle=DEFAULT_KNOT_ANGLE, other=None):
    p = standard_sphere()
    p, _ = approximate_transverse(p, "A", angle)
    p, _ = approximate_transverse(p, "B", other or angle)
    return p


def model_torus(forest=None, meridian=(0, 1), angle=QUARTER_PI):
    p = standard_sphere()
    p, _ = approximate_transverse(p, "K", angle)
    p, _ = declare_torus(p, "T", at="K", meridian=meridian,
                         forest=None if forest is None else parse_forest(forest, 1))
    return p


class TestStandardSphere:
    def test_single_opaque_piece(self):
        p = standard_sphere()
        assert len(p.pieces) == 1 and not p.interfaces
        assert isinstance(p.pieces["P0"], Opaque)
        assert not p.counters.overtwisted
        check_ledger(p)

    def test_report(self):
        r = invariant_report(standard_sphere())
        assert (r["pieces"], r["overtwisted"], r["torsion_half_units"], r["simple_lutz_count"]) == (1, False, 0, 0)

    def test_separating_torus_is_balanced(self):
        p, ref = declare_torus(standard_sphere(), "T", slope=Slope(2, 3))
        assert relative_euler(ref.ds) == 0


class TestRegistration:
    def test_default_neighbourhood(self):
        p, ref = approximate_transverse(standard_sphere(), "K")
        assert p.pieces[ref.piece].twist_end == TwistAngle(0, Slope(-1, 100))
        check_ledger(p)

    def test_disjoint_neighbourhoods(self):
        p = two_knots()
        assert p.knot("A").piece != p.knot("B").piece
        check_ledger(p)

    @pytest.mark.parametrize("k", [10, 100, 1000])
    def test_slope_tends_to_zero(self, k):
        p, ref = approximate_transverse(standard_sphere(), "K", TwistAngle(0, Slope(-1, k)))
        assert abs(p.pieces[ref.piece].twist_end.s.value()) == pytest.approx(1 / k)

    def test_duplicate_name(self):
        p = two_knots()
        with pytest.raises(LedgerError):
            approximate_transverse(p, "A")

    def test_core_of_a_neighbourhood_splits_it(self):
        p, _ = approximate_transverse(standard_sphere(), "K", THREE_QUARTER_PI)
        p, ref = approximate_transverse(p, "C", QUARTER_PI, inside="K")
        kinds = sorted(x.kind for x in p.pieces.values())
        assert kinds == ["Opaque", "SolidTorus", "ThickenedTorus"]
        check_ledger(p)
        with pytest.raises(LedgerError):
            approximate_transverse(p, "D", THREE_QUARTER_PI, inside="C")


class TestRoundSurgery1:
    def test_unlink(self):
        p = round_surgery_1(two_knots(), "A", "B")
        kinds = sorted(x.kind for x in p.pieces.values())
        assert kinds == ["Opaque", "ThickenedTorus"]
        assert len(p.interfaces) == 2
        ev = p.events[-1]
        assert (ev.kind, ev.index) == ("rsurg1", 1)
        check_ledger(p)

    def test_framing_mismatch(self):
        p = two_knots(DEFAULT_KNOT_ANGLE, QUARTER_PI)
        with pytest.raises(FramingMismatch):
            round_surgery_1(p, "A", "B")

    def test_framing_can_repair(self):
        # slope -1 -> -1/100 is not unimodular, but -1 -> 1 is
        p = two_knots(QUARTER_PI, TwistAngle(1, Slope(1, 1)))
        p = round_surgery_1(p, "A", "B", BasisChange(1, 0, 0, -1))
        check_ledger(p)

    def test_same_knot(self):
        with pytest.raises(KnotsNotDisjoint):
            round_surgery_1(two_knots(), "A", "A")

    def test_unknown_knot(self):
        with pytest.raises(KnotNotFound):
            round_surgery_1(two_knots(), "A", "Z")

    def test_reverse_restores_and_is_index_2(self):
        p0 = two_knots()
        p1 = round_surgery_1(p0, "A", "B")
        p2 = reverse(p1, len(p1.events))
        assert state_json(p2) == state_json(p0)
        assert (p2.events[-1].kind, p2.events[-1].index) == ("reversal", 2)


class TestRoundSurgery2:
    def test_model_torus(self):
        p = round_surgery_2(model_torus(), "T")
        ev = p.events[-1]
        n1, n2 = p.pieces[ev.site["N1"]], p.pieces[ev.site["N2"]]
        assert n1.twist_end == THREE_QUARTER_PI
        assert n2.twist_end == QUARTER_PI
        assert ev.site["model"] == "zeta0"
        assert not p.counters.overtwisted
        check_ledger(p)

    def test_frames(self):
        assert meridian_frame((0, 1)) == BasisChange(0, -1, 1, 0)

    @given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-6, 6), st.integers(0, 6))
    def test_glued_tori_complement(self, a, b, sp, sq):
        from math import gcd
        if gcd(a, b) != 1 or (sp, sq) == (0, 0):
            return
        slope = Slope(sp, sq)
        n1, n2, model, m1, m2 = glued_solid_tori(slope, (a, b))
        assert n1 > TwistAngle(0, Slope(0, 1)) and n1 <= HALF_TURN
        assert n1.s == Slope(*m1.apply(slope.p, slope.q))
        assert n2.s == Slope(*m2.apply(slope.p, slope.q))
        total = TwistAngle(2 if model == "zeta1" else 1, Slope(0, 1))
        assert n1 + n2 == total

    def test_meridional_uses_the_larger_model(self):
        # slope 0 with surgery meridian mu: the dividing curves are meridians of N1
        p = round_surgery_2(model_torus(angle=TwistAngle(0, Slope(-1, 100)), meridian=(1, 0)), "T")
        ev = p.events[-1]
        assert ev.site["model"] == "zeta0"
        p, _ = declare_torus(standard_sphere(), "U", slope=Slope(0, 1), meridian=(1, 0))
        p = round_surgery_2(p, "U")
        ev = p.events[-1]
        assert ev.site["model"] == "zeta1"
        assert p.pieces[ev.site["N1"]].twist_end == HALF_TURN == p.pieces[ev.site["N2"]].twist_end

    def test_contractible_curves_are_normalized(self):
        p = round_surgery_2(model_torus("0:{-}, 1:{+}"), "T")
        ev = p.events[-1]
        assert [s.op for s in ev.trace] == ["op_II"]
        assert p.counters.overtwisted
        check_ledger(p)

    def test_obstruction(self):
        with pytest.raises(EulerObstruction):
            round_surgery_2(model_torus("1:{+}"), "T")

    def test_no_meridian(self):
        with pytest.raises(NoMeridian):
            round_surgery_2(model_torus(meridian=None), "T")

    @pytest.mark.parametrize("forest", ["1:{+}", "0:{-}", "0:{- -}", "1:{+(-(+))}"])
    def test_unbalanced_non_separating_always_errors(self, forest):
        p, _ = declare_torus(standard_sphere(), "T", separating=False, meridian=(0, 1),
                             forest=parse_forest(forest, 1))
        with pytest.raises(EulerObstruction):
            round_surgery_2(p, "T")

    def test_reverse_is_index_1(self):
        p0 = model_torus()
        p1 = round_surgery_2(p0, "T")
        p2 = reverse(p1, len(p1.events))
        assert state_json(p2) == state_json(p0)
        assert (p2.events[-1].kind, p2.events[-1].index) == ("reversal", 1)

    def test_reverse_of_reverse_replays(self):
        p0 = model_torus()
        p1 = round_surgery_2(p0, "T")
        p3 = reverse(reverse(p1, len(p1.events)), len(p1.events) + 1)
        assert state_json(p3) == state_json(p1)
        assert p3.events[-1].index == 2


class TestReversal:
    def test_consumed_pieces_block_reversal(self):
        p, _ = approximate_transverse(standard_sphere(), "K", QUARTER_PI)
        p, _ = approximate_transverse(p, "J", QUARTER_PI)
        p, _ = declare_torus(p, "T", at="K", meridian=(0, 1))
        p = round_surgery_2(p, "T")
        n2 = p.events[-1].site["N2"]
        p, _ = approximate_transverse(p, "C", QUARTER_PI, piece=n2)
        p = round_surgery_1(p, "C", "J")
        with pytest.raises(EventNotReversibleHere):
            reverse(p, 4)

    def test_unknown_event(self):
        with pytest.raises(EventNotReversibleHere):
            reverse(standard_sphere(), 1)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000))
    def test_random_scripts_round_trip(self, seed):
        p = random_presentation(RandomScriptConfig(surgeries=6, seed=seed))
        check_ledger(p)
        back = reverse_all(p)
        check_ledger(back)
        assert state_json(back) == state_json(standard_sphere())

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000))
    def test_redo_after_undo(self, seed):
        p = random_presentation(RandomScriptConfig(surgeries=4, seed=seed))
        n = len(p.events)
        undone = reverse(p, n)
        redone = reverse(undone, n + 1)
        assert state_json(redone) == state_json(p)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000))
    def test_overtwisted_is_sticky(self, seed):
        p = random_presentation(RandomScriptConfig(surgeries=5, seed=seed))
        seen = False
        for ev in p.events:
            if seen:
                assert ev.ot_after[0]
            seen = seen or ev.ot_after[0]


def test_canonical_form_ignores_ids_of_layers():
    p = round_surgery_1(two_knots(), "A", "B")
    cf = canonical_form(p)
    assert all(x["kind"] != "ThickenedTorus" for x in cf["pieces"])
    assert any(isinstance(x, ThickenedTorus) for x in p.pieces.values())
    assert not any(isinstance(x, SolidTorus) for x in p.pieces.values())
