"""Lutz twists along transverse knots and pre-Lagrangian tori, the torsion
bound, relative Euler adjustment, and the expansion of a Lutz twist into four
contact round surgeries.
"""

from __future__ import annotations

from dataclasses import replace

from .dividing import Node, TorusDividingSet, giroux_overtwisted, relative_euler
from .errors import (
    LedgerError,
    MacroPostconditionFailed,
    NotPreLagrangian,
    TargetParityMismatch,
)
from .slope_calc import IDENTITY, QUARTER_PI, TwistAngle, add_half_turn
from .surgery import (
    Change,
    Presentation,
    SolidTorus,
    ThickenedTorus,
    approximate_transverse,
    canonical_form,
    declare_torus,
    radial_chains,
    round_surgery_1,
    round_surgery_2,
    set_meridian,
)

LAMBDA = (0, 1)


def simple_lutz_knot(p: Presentation, k, torus_updates=()) -> Presentation:
    """Replace the knot's neighbourhood by one whose planes turn half a turn more."""
    ref = p.knot(k)
    piece = p.pieces[ref.piece]
    ch = Change(p)
    ch.remove_piece(piece.id)
    ch.add_piece(replace(piece, twist_end=add_half_turn(piece.twist_end)))
    for name, ds in torus_updates:
        ch.track(name, replace(p.torus(name), ds=ds))
    ch.count(simple=1, torsion=1)
    ch.set_ot = True
    site = {"knot": k, "half_turns": 1, "piece": piece.id}
    if torus_updates:
        site["tori"] = [name for name, _ in torus_updates]
    return ch.commit("lutz", site=site)


def full_lutz_knot(p: Presentation, k) -> Presentation:
    return simple_lutz_knot(simple_lutz_knot(p, k), k)


def lutz_torus(p: Presentation, t, amount: int = 1) -> Presentation:
    """Insert a layer turning `amount` half-turns at a pre-Lagrangian torus."""
    if amount < 1:
        raise ValueError("a Lutz twist needs at least one half-turn")
    ref = p.torus(t)
    if giroux_overtwisted(ref.ds):
        raise NotPreLagrangian(f"torus {t} has contractible dividing curves, so no linear foliation")
    lo = ref.angle if ref.angle is not None else TwistAngle(0, ref.ds.slope)
    ch = Change(p)
    if ref.iface is not None:
        i = p.interfaces[ref.iface]
        inner = ref.inner
        outer, g = i.other(inner), i.gluing_from(inner)
        basis = getattr(p.pieces[inner[0]], "basis", IDENTITY)
        ch.remove_iface(i.id)
    else:
        inner, outer, g = (ref.host, f"{t}-"), (ref.host, f"{t}+"), IDENTITY
        basis = IDENTITY
    # the layer is read in the inner side's frame
    layer = ThickenedTorus(ch.fresh(), lo, add_half_turn(lo, amount), basis, ref.ds.pairs)
    ch.add_piece(layer)
    near = ch.add_iface((layer.id, "lo"), inner, IDENTITY, lo.s, layer.pairs)
    ch.add_iface((layer.id, "hi"), outer, g, lo.s, layer.pairs)
    ch.track(t, replace(ref, iface=near.id, inner=inner, host=None, angle=lo))
    ch.count(torus=amount, torsion=amount)
    return ch.commit("lutz", site={"torus": t, "half_turns": amount, "layer": layer.id})


def torsion_lower_bound(p: Presentation) -> int:
    """Whole half-turns in the longest radial chain of model pieces."""
    return max((total.half_turns_floor() for _, total in radial_chains(p)), default=0)


def _fresh_name(p, stem):
    k = 1
    while f"{stem}{k}" in p.tracked:
        k += 1
    return f"{stem}{k}"


def _surgery_pair(q, t, stem):
    """One index-2 surgery along t with the surgery meridian lambda, then one
    index-1 surgery along the cores of the two glued solid tori, leaving the
    layer N1 minus a neighbourhood of its core."""
    q = round_surgery_2(q, t)
    site = q.events[-1].site
    n1, n2 = site["N1"], site["N2"]
    g1 = _fresh_name(q, f"{stem}.gamma")
    q, _ = approximate_transverse(q, g1, QUARTER_PI, piece=n1)
    g2 = _fresh_name(q, f"{stem}.gamma")
    q, _ = approximate_transverse(q, g2, q.pieces[n2].twist_end, piece=n2)
    q = round_surgery_1(q, g1, g2)
    return q


def lutz_as_round_surgeries(p: Presentation, t):
    """Realize lutz_torus(p, t, 1) as four contact round surgeries.

    t must bound a model neighbourhood V at angle pi/4 (slope -1 in V's frame).
    Returns (presentation, the four surgery events)."""
    ref = p.torus(t)
    if ref.iface is None or not isinstance(p.pieces.get(ref.inner[0]), SolidTorus):
        raise LedgerError(f"torus {t} does not bound a model neighbourhood")
    v = p.pieces[ref.inner[0]]
    if v.twist_end != QUARTER_PI:
        raise LedgerError(f"torus {t} sits at angle {v.twist_end.text()}, not in the pi/4 window")
    if ref.meridian not in (None, LAMBDA):
        raise LedgerError("the expansion uses lambda as the surgery meridian")
    direct = lutz_torus(p, t, 1)
    q = p if ref.meridian == LAMBDA else set_meridian(p, t, LAMBDA)
    first = len(q.events)
    stem = f"#{t}"
    # (1) + (2): along t itself
    q = _surgery_pair(q, t, stem)
    # (3) + (4): along the torus between V and the collar just glued in
    inner = (v.id, "out")
    tt = _fresh_name(q, f"{stem}.tilde")
    q, _ = declare_torus(q, tt, iface=q.iface_at(inner).id, inner=inner, meridian=LAMBDA)
    q = _surgery_pair(q, tt, stem)
    ch = Change(q)
    ch.track(t, replace(ref, iface=q.iface_at(inner).id, inner=inner))
    ch.count(simple=1, torsion=1)
    surgeries = [e for e in q.events[first:] if e.kind in ("rsurg1", "rsurg2")]
    q = ch.commit("macro", site={"torus": t, "surgeries": [e.no for e in surgeries]})
    if canonical_form(q) != canonical_form(direct):
        raise MacroPostconditionFailed("four round surgeries did not reproduce the Lutz twist")
    return q, surgeries


def adjust_relative_euler(p: Presentation, t, target: int = 0) -> Presentation:
    """Simple Lutz twists along knots meeting R+ (or R-) once until the
    relative Euler number of t reaches target.  Each twist adds one
    contractible dividing curve, changing the relative Euler number by -2
    (through R+) or +2 (through R-)."""
    ref = p.torus(t)
    rel = relative_euler(ref.ds)
    if (target - rel) % 2:
        raise TargetParityMismatch(f"cannot move relative Euler number {rel} to {target}")
    if rel != target and ref.separating:
        raise LedgerError(f"torus {t} is separating; its relative Euler number is fixed")
    q = p
    while rel != target:
        ds = q.torus(t).ds
        forest = [list(r) for r in ds.forest]
        if rel > target:
            forest[0].append(Node(-1))  # a negative disk in R+
        else:
            forest[1].append(Node(1))  # a positive disk in R-
        new = TorusDividingSet(ds.pairs, ds.slope, tuple(tuple(r) for r in forest))
        k = _fresh_name(q, f"#{t}.euler")
        q, _ = approximate_transverse(q, k, host=ref.host)
        q = simple_lutz_knot(q, k, torus_updates=((t, new),))
        rel = relative_euler(new)
    return q

