"""Presentations of contact 3-manifolds as glued model pieces, and contact
round surgeries of index 1 and 2 with their reversals.

Every piece carries its own (meridian, longitude) frame.  An interface glues
side `a` to side `b`; its `gluing` maps slopes read in a's frame to slopes
read in b's frame.  Model solid tori and thickened tori have boundary slopes
fixed by their twist angles, so interfaces between them are checked.

Presentations are immutable.  Every operation returns a new one together
with an appended event that records exactly what was removed and added, which
is what makes every event reversible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import ClassVar

from .dividing import TorusDividingSet, giroux_overtwisted, normalize, relative_euler
from .errors import (
    EulerObstruction,
    EventNotReversibleHere,
    FramingMismatch,
    KnotNotFound,
    KnotsNotDisjoint,
    LedgerError,
    NoMeridian,
    TorusNotFound,
)
from .slope_calc import (
    ANGLE_ZERO,
    DEFAULT_KNOT_ANGLE,
    HALF_TURN,
    IDENTITY,
    ZERO,
    BasisChange,
    Slope,
    TwistAngle,
    change_basis,
    extend_to_basis,
    first_angle_with_slope,
)

FLIP_MERIDIAN = BasisChange(1, 0, 0, -1)


# -- pieces --------------------------------------------------------------------

@dataclass(frozen=True)
class SolidTorus:
    """Model neighbourhood S^1 x D whose planes turn from angle 0 at the core
    to twist_end at the boundary."""

    id: str
    twist_end: TwistAngle
    basis: BasisChange = IDENTITY
    pairs: int = 1
    kind: ClassVar[str] = "SolidTorus"
    sides: ClassVar[tuple] = ("out",)

    def __post_init__(self):
        if self.twist_end <= ANGLE_ZERO:
            raise LedgerError(f"solid torus {self.id} needs a positive twist angle")

    def boundary_slope(self, side):
        return self.twist_end.s

    def to_dict(self):
        return {"id": self.id, "kind": self.kind, "twist_end": self.twist_end.text(),
                "slope": self.twist_end.s.text(), "basis": self.basis.text(), "pairs": self.pairs}


@dataclass(frozen=True)
class ThickenedTorus:
    """Model layer I x T^2 spanning the angles [twist_lo, twist_hi].

    An invariant layer (the collar glued in by an index-1 surgery) has
    twist_lo == twist_hi."""

    id: str
    twist_lo: TwistAngle
    twist_hi: TwistAngle
    basis: BasisChange = IDENTITY
    pairs: int = 1
    invariant: bool = False
    kind: ClassVar[str] = "ThickenedTorus"
    sides: ClassVar[tuple] = ("lo", "hi")

    def __post_init__(self):
        ok = self.twist_lo <= self.twist_hi if self.invariant else self.twist_lo < self.twist_hi
        if not ok:
            raise LedgerError(f"layer {self.id} has an empty angle window")

    def span(self) -> TwistAngle:
        return self.twist_hi - self.twist_lo

    def boundary_slope(self, side):
        return (self.twist_lo if side == "lo" else self.twist_hi).s

    def to_dict(self):
        return {"id": self.id, "kind": self.kind, "twist_lo": self.twist_lo.text(),
                "twist_hi": self.twist_hi.text(), "basis": self.basis.text(),
                "pairs": self.pairs, "invariant": self.invariant}


@dataclass(frozen=True)
class Opaque:
    """A piece with no model structure; its boundary tori are named by the
    interfaces that touch it."""

    id: str
    label: str
    kind: ClassVar[str] = "Opaque"
    sides: ClassVar[tuple] = ()

    def boundary_slope(self, side):
        return None

    def to_dict(self):
        return {"id": self.id, "kind": self.kind, "label": self.label}


@dataclass(frozen=True)
class Interface:
    id: str
    a: tuple
    b: tuple
    gluing: BasisChange
    slope: Slope  # read in a's frame
    pairs: int = 1

    def other(self, side):
        return self.b if side == self.a else self.a

    def gluing_from(self, side) -> BasisChange:
        return self.gluing if side == self.a else self.gluing.inverse()

    def slope_at(self, side) -> Slope:
        return self.slope if side == self.a else change_basis(self.slope, self.gluing)

    def to_dict(self):
        return {"id": self.id, "a": list(self.a), "b": list(self.b), "gluing": self.gluing.text(),
                "slope": self.slope.text(), "pairs": self.pairs}


# -- tracked objects -----------------------------------------------------------

@dataclass(frozen=True)
class TransverseKnotRef:
    piece: str
    framing: BasisChange = IDENTITY
    kind: ClassVar[str] = "knot"

    def to_dict(self):
        return {"kind": self.kind, "piece": self.piece, "framing": self.framing.text()}


@dataclass(frozen=True)
class ConvexTorusRef:
    """A convex torus either sitting at an interface (inner side named) or
    embedded in an opaque host.  Its frame is the inner side's frame."""

    ds: TorusDividingSet
    meridian: tuple | None = None
    separating: bool = True
    iface: str | None = None
    inner: tuple | None = None
    host: str | None = None
    angle: TwistAngle | None = None
    kind: ClassVar[str] = "torus"

    def to_dict(self):
        d = {"kind": self.kind, "ds": self.ds.text(), "separating": self.separating,
             "meridian": None if self.meridian is None else list(self.meridian)}
        if self.iface is not None:
            d["iface"] = self.iface
            d["inner"] = list(self.inner)
        else:
            d["host"] = self.host
        if self.angle is not None:
            d["angle"] = self.angle.text()
        return d


# -- presentation and events ---------------------------------------------------

@dataclass(frozen=True)
class Counters:
    simple_lutz_count: int = 0
    torus_lutz_count: int = 0
    torsion_half_units: int = 0
    overtwisted: bool = False
    ot_cause: int | None = None

    def to_dict(self):
        return {"simple_lutz_count": self.simple_lutz_count,
                "torus_lutz_count": self.torus_lutz_count,
                "torsion_half_units": self.torsion_half_units,
                "overtwisted": self.overtwisted, "ot_cause": self.ot_cause}


COUNTER_FIELDS = ("simple_lutz_count", "torus_lutz_count", "torsion_half_units")
SURGERY_KINDS = ("rsurg1", "rsurg2")


@dataclass(frozen=True)
class SurgeryEvent:
    no: int
    kind: str
    index: int | None
    site: dict
    removed: tuple = ()
    added: tuple = ()
    removed_interfaces: tuple = ()
    added_interfaces: tuple = ()
    tracked: tuple = ()  # (name, before, after)
    counter_delta: tuple = (0, 0, 0)
    ot_before: tuple = (False, None)
    ot_after: tuple = (False, None)
    trace: tuple = ()
    reverses: int | None = None

    @property
    def is_surgery(self):
        return self.kind in SURGERY_KINDS or (self.kind == "reversal" and self.index is not None)

    def to_dict(self):
        def ref(r):
            return None if r is None else r.to_dict()
        return {
            "no": self.no, "kind": self.kind, "index": self.index, "site": self.site,
            "removed": [x.to_dict() for x in self.removed],
            "added": [x.to_dict() for x in self.added],
            "removed_interfaces": [x.to_dict() for x in self.removed_interfaces],
            "added_interfaces": [x.to_dict() for x in self.added_interfaces],
            "tracked": [[n, ref(b), ref(a)] for n, b, a in self.tracked],
            "counter_delta": dict(zip(COUNTER_FIELDS, self.counter_delta)),
            "overtwisted": [list(self.ot_before), list(self.ot_after)],
            "trace": [s.to_dict() for s in self.trace],
            "reverses": self.reverses,
        }


@dataclass(frozen=True)
class Presentation:
    pieces: dict
    interfaces: dict
    tracked: dict = field(default_factory=dict)
    counters: Counters = Counters()
    events: tuple = ()
    next_id: int = 0

    def piece(self, pid):
        try:
            return self.pieces[pid]
        except KeyError:
            raise LedgerError(f"no piece {pid}") from None

    def iface_at(self, side):
        for i in self.interfaces.values():
            if side in (i.a, i.b):
                return i
        raise LedgerError(f"boundary {side} is not glued")

    def knot(self, name) -> TransverseKnotRef:
        ref = self.tracked.get(name)
        if not isinstance(ref, TransverseKnotRef):
            raise KnotNotFound(f"no knot named {name!r}")
        return ref

    def torus(self, name) -> ConvexTorusRef:
        ref = self.tracked.get(name)
        if not isinstance(ref, ConvexTorusRef):
            raise TorusNotFound(f"no torus named {name!r}")
        return ref

    def event(self, no) -> SurgeryEvent:
        if not 1 <= no <= len(self.events):
            raise EventNotReversibleHere(f"no event {no}")
        return self.events[no - 1]

    def surgery_events(self):
        return [e for e in self.events if e.is_surgery]


def standard_sphere() -> Presentation:
    return Presentation({"P0": Opaque("P0", "tight S3")}, {}, next_id=1)


# -- change builder ------------------------------------------------------------

class Change:
    """Collects one event's worth of edits against a presentation."""

    def __init__(self, p: Presentation):
        self.p = p
        self.pieces = dict(p.pieces)
        self.interfaces = dict(p.interfaces)
        self.tracked_now = dict(p.tracked)
        self.removed, self.added = {}, {}
        self.removed_if, self.added_if = {}, {}
        self.tracked = {}
        self.delta = [0, 0, 0]
        self.next_id = p.next_id
        self.set_ot = False
        self.trace = ()

    def fresh(self, prefix="P"):
        pid = f"{prefix}{self.next_id}"
        self.next_id += 1
        return pid

    def remove_piece(self, pid):
        piece = self.pieces.pop(pid)
        if pid in self.added:
            del self.added[pid]
        else:
            self.removed[pid] = piece

    def add_piece(self, piece):
        self.pieces[piece.id] = piece
        self.added[piece.id] = piece

    def remove_iface(self, iid):
        iface = self.interfaces.pop(iid)
        if iid in self.added_if:
            del self.added_if[iid]
        else:
            self.removed_if[iid] = iface

    def add_iface(self, a, b, gluing, slope, pairs=1):
        iface = Interface(self.fresh("I"), a, b, gluing, slope, pairs)
        self.interfaces[iface.id] = iface
        self.added_if[iface.id] = iface
        return iface

    def track(self, name, ref):
        before = self.tracked[name][0] if name in self.tracked else self.p.tracked.get(name)
        self.tracked[name] = (before, ref)
        if ref is None:
            self.tracked_now.pop(name, None)
        else:
            self.tracked_now[name] = ref

    def count(self, simple=0, torus=0, torsion=0):
        self.delta[0] += simple
        self.delta[1] += torus
        self.delta[2] += torsion

    def _prune(self):
        """Drop tracked objects whose piece or interface disappeared."""
        for name, ref in sorted(self.tracked_now.items()):
            if name in self.tracked:
                continue
            gone = (isinstance(ref, TransverseKnotRef) and ref.piece not in self.pieces) or (
                isinstance(ref, ConvexTorusRef) and (
                    (ref.iface is not None and ref.iface not in self.interfaces)
                    or (ref.host is not None and ref.host not in self.pieces)))
            if gone:
                self.track(name, None)

    def commit(self, kind, index=None, site=None, reverses=None, ot=None) -> Presentation:
        self._prune()
        p = self.p
        no = len(p.events) + 1
        c = p.counters
        counters = replace(c, **{f: getattr(c, f) + d for f, d in zip(COUNTER_FIELDS, self.delta)})
        draft = Presentation(self.pieces, self.interfaces, self.tracked_now, counters, p.events, self.next_id)
        ot_before = (c.overtwisted, c.ot_cause)
        if ot is not None:
            ot_after = ot
        elif c.overtwisted:
            ot_after = ot_before
        elif self.set_ot or chain_overtwisted(draft):
            ot_after = (True, no)
        else:
            ot_after = ot_before
        counters = replace(counters, overtwisted=ot_after[0], ot_cause=ot_after[1])
        event = SurgeryEvent(
            no=no, kind=kind, index=index, site=dict(site or {}),
            removed=tuple(self.removed[k] for k in sorted(self.removed)),
            added=tuple(self.added[k] for k in sorted(self.added)),
            removed_interfaces=tuple(self.removed_if[k] for k in sorted(self.removed_if)),
            added_interfaces=tuple(self.added_if[k] for k in sorted(self.added_if)),
            tracked=tuple((n, b, a) for n, (b, a) in sorted(self.tracked.items()) if b != a),
            counter_delta=tuple(self.delta), ot_before=ot_before, ot_after=ot_after,
            trace=tuple(self.trace), reverses=reverses)
        return replace(draft, counters=counters, events=p.events + (event,))


# -- radial chains ---------------------------------------------------------------

def _neighbours(p: Presentation):
    nb = {}
    for i in p.interfaces.values():
        nb[i.a] = i.b
        nb[i.b] = i.a
    return nb


def radial_chains(p: Presentation):
    """Maximal radial chains of model pieces as (piece ids, total angle span).

    A chain starts at a solid torus (its core contributes its own twist angle)
    and continues through glued layers; chains of layers alone are included too."""
    nb = _neighbours(p)
    chains, seen_layers = [], set()

    def walk(side, ids, total):
        while side is not None:
            piece = p.pieces[side[0]]
            if not isinstance(piece, ThickenedTorus) or piece.id in ids:
                break
            ids.append(piece.id)
            seen_layers.add(piece.id)
            total = total + piece.span()
            side = nb.get((piece.id, "hi" if side[1] == "lo" else "lo"))
        return ids, total

    for pid in sorted(p.pieces):
        piece = p.pieces[pid]
        if isinstance(piece, SolidTorus):
            chains.append(walk(nb.get((pid, "out")), [pid], piece.twist_end))
    for pid in sorted(p.pieces):
        piece = p.pieces[pid]
        if isinstance(piece, ThickenedTorus) and pid not in seen_layers:
            # find the outward face of one end of the layer run, then walk back
            side, cur = (pid, "lo"), {pid}
            while True:
                nxt = nb.get(side)
                if nxt is None or not isinstance(p.pieces[nxt[0]], ThickenedTorus) or nxt[0] in cur:
                    break
                cur.add(nxt[0])
                side = (nxt[0], "hi" if nxt[1] == "lo" else "lo")
            entry = side
            ids, total = walk(entry, [], ANGLE_ZERO)
            chains.append((ids, total))
    return chains


def chain_overtwisted(p: Presentation) -> bool:
    return any(ids and isinstance(p.pieces[ids[0]], SolidTorus) and total >= HALF_TURN
               for ids, total in radial_chains(p))


# -- ledger checks and serialization -------------------------------------------

def check_ledger(p: Presentation):
    """Raise LedgerError unless every interface joins existing pieces with
    matching slopes and every model boundary is glued exactly once."""
    used = {}
    for i in p.interfaces.values():
        for side in (i.a, i.b):
            if side[0] not in p.pieces:
                raise LedgerError(f"interface {i.id} touches missing piece {side[0]}")
            piece = p.pieces[side[0]]
            if piece.sides and side[1] not in piece.sides:
                raise LedgerError(f"{piece.id} has no boundary {side[1]}")
            if side in used:
                raise LedgerError(f"boundary {side} glued twice")
            used[side] = i.id
        sa = p.pieces[i.a[0]].boundary_slope(i.a[1])
        sb = p.pieces[i.b[0]].boundary_slope(i.b[1])
        if sa is not None and sa != i.slope:
            raise LedgerError(f"interface {i.id} records slope {i.slope}, boundary has {sa}")
        if sb is not None and change_basis(i.slope, i.gluing) != sb:
            raise LedgerError(f"interface {i.id}: slopes disagree under the gluing")
    for piece in p.pieces.values():
        for s in piece.sides:
            if (piece.id, s) not in used:
                raise LedgerError(f"boundary {s} of {piece.id} is not glued")
    for name, ref in p.tracked.items():
        if isinstance(ref, TransverseKnotRef) and not isinstance(p.pieces.get(ref.piece), SolidTorus):
            raise LedgerError(f"knot {name} has no neighbourhood")
        if isinstance(ref, ConvexTorusRef) and ref.iface is not None and ref.iface not in p.interfaces:
            raise LedgerError(f"torus {name} sits on a missing interface")


def state_dict(p: Presentation) -> dict:
    """Everything except the event log and the id counter."""
    return {
        "pieces": [p.pieces[k].to_dict() for k in sorted(p.pieces)],
        "interfaces": [p.interfaces[k].to_dict() for k in sorted(p.interfaces)],
        "tracked": {k: p.tracked[k].to_dict() for k in sorted(p.tracked)},
        "counters": p.counters.to_dict(),
    }


def to_dict(p: Presentation) -> dict:
    d = state_dict(p)
    d["events"] = [e.to_dict() for e in p.events]
    d["next_id"] = p.next_id
    return d


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def state_json(p: Presentation) -> str:
    return dumps(state_dict(p))


def canonical_form(p: Presentation) -> dict:
    """Layer runs merged into one span normalised to start at 0; terminal
    pieces keep their ids and the slopes seen from their side.  Tracked
    objects, events and the Lutz counters are left out."""
    nb = _neighbours(p)

    def end(side):
        piece = p.pieces[side[0]]
        slope = p.iface_at(side).slope_at(side)
        return [piece.id, side[1], slope.text()]

    solid = [p.pieces[k].to_dict() for k in sorted(p.pieces) if not isinstance(p.pieces[k], ThickenedTorus)]
    joints = set()
    for i in p.interfaces.values():
        for start in (i.a, i.b):
            if isinstance(p.pieces[start[0]], ThickenedTorus):
                continue
            side, total, pairs = nb[start], ANGLE_ZERO, None
            layers = 0
            while isinstance(p.pieces[side[0]], ThickenedTorus):
                layer = p.pieces[side[0]]
                total = total + layer.span()
                pairs = layer.pairs
                layers += 1
                side = nb[(layer.id, "hi" if side[1] == "lo" else "lo")]
            ends = sorted([end(start), end(side)])
            if layers:
                rec = {"ends": ends, "layer": [ANGLE_ZERO.text(), total.text()], "pairs": pairs}
            else:
                rec = {"ends": ends, "pairs": i.pairs}
            joints.add(json.dumps(rec, sort_keys=True))
    c = p.counters
    return {"pieces": solid, "joints": sorted(joints),
            "counters": {"torsion_half_units": c.torsion_half_units, "overtwisted": c.overtwisted}}


# -- registration ----------------------------------------------------------------

def _default_host(p: Presentation, host=None) -> str:
    if host is not None:
        if not isinstance(p.pieces.get(host), Opaque):
            raise LedgerError(f"{host} is not an opaque piece")
        return host
    for pid in sorted(p.pieces):
        if isinstance(p.pieces[pid], Opaque):
            return pid
    raise LedgerError("no opaque piece to host a new object")


def _check_new_name(p, name):
    if name in p.tracked:
        raise LedgerError(f"name {name!r} is already in use")


def approximate_transverse(p: Presentation, name, angle: TwistAngle = DEFAULT_KNOT_ANGLE,
                           framing: BasisChange = IDENTITY, inside=None, host=None, piece=None):
    """Register a transverse knot with a standard neighbourhood of the given angle.

    With `inside` (a knot name) or `piece` (a solid torus id), the knot is the
    core of that solid torus, which is split into a smaller solid torus and a
    layer.
    Returns (presentation, knot ref)."""
    _check_new_name(p, name)
    if angle <= ANGLE_ZERO:
        raise LedgerError("a neighbourhood angle must be positive")
    ch = Change(p)
    if inside is None and piece is None:
        host = _default_host(p, host)
        v = SolidTorus(ch.fresh(), angle, framing)
        ch.add_piece(v)
        ch.add_iface((v.id, "out"), (host, name), framing, angle.s, v.pairs)
        ref = TransverseKnotRef(v.id, framing)
        site = {"knot": name, "angle": angle.text(), "host": host}
    else:
        h = p.pieces[p.knot(inside).piece] if inside is not None else p.piece(piece)
        if not isinstance(h, SolidTorus):
            raise LedgerError(f"{h.id} is not a solid torus")
        if angle > h.twist_end:
            raise LedgerError(f"angle {angle.text()} does not fit inside {inside or h.id}")
        site = {"knot": name, "angle": angle.text(), "inside": inside or h.id}
        if angle == h.twist_end:
            ref = TransverseKnotRef(h.id, h.basis)
        else:
            old = p.iface_at((h.id, "out"))
            v = SolidTorus(ch.fresh(), angle, h.basis, h.pairs)
            w = ThickenedTorus(ch.fresh(), angle, h.twist_end, h.basis, h.pairs)
            ch.remove_piece(h.id)
            ch.remove_iface(old.id)
            ch.add_piece(v)
            ch.add_piece(w)
            ch.add_iface((v.id, "out"), (w.id, "lo"), IDENTITY, angle.s, h.pairs)
            outer = old.other((h.id, "out"))
            new = ch.add_iface((w.id, "hi"), outer, old.gluing_from((h.id, "out")), h.twist_end.s, h.pairs)
            ref = TransverseKnotRef(v.id, h.basis)
            for other, r in sorted(p.tracked.items()):
                if isinstance(r, TransverseKnotRef) and r.piece == h.id:
                    ch.track(other, replace(r, piece=v.id))
                elif isinstance(r, ConvexTorusRef) and r.iface == old.id:
                    inner = (w.id, "hi") if r.inner == (h.id, "out") else outer
                    ch.track(other, replace(r, iface=new.id, inner=inner))
    ch.track(name, ref)
    return ch.commit("declare", site=site), ref


def _primitive(m):
    from math import gcd
    if m is None:
        return None
    a, b = m
    if gcd(a, b) != 1:
        raise LedgerError(f"surgery meridian {m} is not primitive")
    return (a, b)


def declare_torus(p: Presentation, name, at=None, slope=None, pairs=None, forest=None,
                  meridian=None, separating=None, angle=None, host=None, iface=None, inner=None):
    """Track a convex torus: the boundary of knot `at`'s neighbourhood, an
    explicit interface, or a torus embedded in an opaque host."""
    _check_new_name(p, name)
    meridian = _primitive(meridian)
    ch = Change(p)
    if at is not None:
        piece = p.pieces[p.knot(at).piece]
        inner = (piece.id, "out")
        iface = p.iface_at(inner).id
    if iface is not None:
        i = p.interfaces.get(iface)
        if i is None or inner not in (i.a, i.b):
            raise LedgerError(f"no interface {iface} with side {inner}")
        boundary = i.slope_at(inner)
        if slope is not None and slope != boundary:
            raise LedgerError(f"torus slope {slope} disagrees with the boundary slope {boundary}")
        slope = boundary
        pairs = pairs or i.pairs
        side_piece = p.pieces[inner[0]]
        if angle is None and isinstance(side_piece, SolidTorus):
            angle = side_piece.twist_end
        elif angle is None and isinstance(side_piece, ThickenedTorus):
            angle = side_piece.twist_lo if inner[1] == "lo" else side_piece.twist_hi
        ds = TorusDividingSet(pairs, slope, forest)
        ref = ConvexTorusRef(ds, meridian, True if separating is None else separating,
                             iface=iface, inner=inner, angle=angle)
        site = {"torus": name, "iface": iface}
    else:
        host = _default_host(p, host)
        ds = TorusDividingSet(pairs or 1, slope or ZERO, forest)
        ref = ConvexTorusRef(ds, meridian, True if separating is None else separating,
                             host=host, angle=angle)
        site = {"torus": name, "host": host}
    ch.track(name, ref)
    return ch.commit("declare", site=site), ref


def set_meridian(p: Presentation, name, meridian):
    ref = p.torus(name)
    ch = Change(p)
    ch.track(name, replace(ref, meridian=_primitive(meridian)))
    return ch.commit("declare", site={"torus": name, "meridian": list(meridian)})


# -- round surgeries -------------------------------------------------------------

def _knot_side(p, name):
    ref = p.knot(name)
    return ref, p.pieces[ref.piece]


def round_surgery_1(p: Presentation, k1, k2, relative_framing: BasisChange = IDENTITY) -> Presentation:
    """Remove the neighbourhoods of two transverse knots and glue in an
    invariant collar I x T^2 joining the exposed boundaries."""
    r1, v1 = _knot_side(p, k1)
    r2, v2 = _knot_side(p, k2)
    if k1 == k2 or v1.id == v2.id:
        raise KnotsNotDisjoint(f"{k1} and {k2} share a neighbourhood")
    i1, i2 = p.iface_at((v1.id, "out")), p.iface_at((v2.id, "out"))
    if i1.id == i2.id:
        raise KnotsNotDisjoint(f"the neighbourhoods of {k1} and {k2} are glued to each other")
    s1, s2 = v1.twist_end.s, v2.twist_end.s
    if change_basis(s1, relative_framing) != s2 or v1.pairs != v2.pairs:
        raise FramingMismatch(
            f"boundary slope {s1} of {k1} maps to {change_basis(s1, relative_framing)}, "
            f"but {k2} has {s2}")
    ch = Change(p)
    x, gx = i1.other((v1.id, "out")), i1.gluing_from((v1.id, "out"))
    y, gy = i2.other((v2.id, "out")), i2.gluing_from((v2.id, "out"))
    for pid in (v1.id, v2.id):
        ch.remove_piece(pid)
    for iid in (i1.id, i2.id):
        ch.remove_iface(iid)
    z = ThickenedTorus(ch.fresh(), v1.twist_end, v1.twist_end, v1.basis, v1.pairs, invariant=True)
    ch.add_piece(z)
    ch.add_iface((z.id, "lo"), x, gx, s1, z.pairs)
    ch.add_iface((z.id, "hi"), y, gy @ relative_framing, s1, z.pairs)
    ch.track(k1, None)
    ch.track(k2, None)
    site = {"knots": [k1, k2], "framing": relative_framing.text(), "slope": s1.text(), "collar": z.id}
    return ch.commit("rsurg1", index=1, site=site)


def meridian_frame(meridian) -> BasisChange:
    """Slope change from the torus frame to the frame (mu1, lambda1) of N1,
    where mu1 is the surgery meridian and det(mu1, lambda1) = 1."""
    mm, ml = meridian
    lm, ll = extend_to_basis(meridian)
    return BasisChange(mm, -ml, -lm, ll)


def glued_solid_tori(slope: Slope, meridian):
    """(N1 twist end, N2 twist end, model, frame to N1, frame to N2) for an
    index-2 surgery on a torus of the given dividing slope."""
    m1 = meridian_frame(meridian)
    m2 = FLIP_MERIDIAN @ m1
    s1 = change_basis(slope, m1)
    n1 = first_angle_with_slope(s1)
    if s1 == ZERO:
        # meridional dividing curves: N2 completes N1 inside the 2pi model
        model, n2 = "zeta1", TwistAngle(2, ZERO) - n1
    else:
        model, n2 = "zeta0", HALF_TURN - n1
    assert n2.s == change_basis(slope, m2)
    return n1, n2, model, m1, m2


def round_surgery_2(p: Presentation, t) -> Presentation:
    """Cut along the convex torus t and cap both sides with model solid tori
    whose meridians are +-(surgery meridian)."""
    ref = p.torus(t)
    if ref.meridian is None:
        raise NoMeridian(f"torus {t} has no surgery meridian")
    rel = relative_euler(ref.ds)
    if rel != 0:
        raise EulerObstruction(
            f"relative Euler number of {t} is {rel}; adjust it with Lutz twists first")
    ds, trace = normalize(ref.ds)
    n1_end, n2_end, model, m1, m2 = glued_solid_tori(ds.slope, ref.meridian)
    ch = Change(p)
    if ref.iface is not None:
        i = p.interfaces[ref.iface]
        inner = ref.inner
        outer, g = i.other(inner), i.gluing_from(inner)
        frame = p.pieces[inner[0]].basis if hasattr(p.pieces[inner[0]], "basis") else IDENTITY
        ch.remove_iface(i.id)
    else:
        inner, outer, g = (ref.host, f"{t}-"), (ref.host, f"{t}+"), IDENTITY
        frame = IDENTITY
    n1 = SolidTorus(ch.fresh(), n1_end, frame @ m1.inverse(), ds.pairs)
    n2 = SolidTorus(ch.fresh(), n2_end, frame @ m2.inverse(), ds.pairs)
    ch.add_piece(n1)
    ch.add_piece(n2)
    ch.add_iface((n1.id, "out"), outer, g @ m1.inverse(), n1_end.s, ds.pairs)
    ch.add_iface((n2.id, "out"), inner, m2.inverse(), n2_end.s, ds.pairs)
    ch.track(t, None)
    ch.trace = trace
    if giroux_overtwisted(ref.ds):
        ch.set_ot = True
    site = {"torus": t, "meridian": list(ref.meridian), "slope": ds.slope.text(), "pairs": ds.pairs,
            "model": model, "N1": n1.id, "N2": n2.id, "relative_euler": rel}
    return ch.commit("rsurg2", index=2, site=site)


# -- reversal --------------------------------------------------------------------

def _check_reversible(p: Presentation, ev: SurgeryEvent):
    for piece in ev.added:
        if p.pieces.get(piece.id) != piece:
            raise EventNotReversibleHere(f"event {ev.no}: piece {piece.id} was changed later")
    added_ids = {x.id for x in ev.added}
    for piece in ev.removed:
        if piece.id not in added_ids and piece.id in p.pieces:
            raise EventNotReversibleHere(f"event {ev.no}: piece {piece.id} is in use")
    for i in ev.added_interfaces:
        if p.interfaces.get(i.id) != i:
            raise EventNotReversibleHere(f"event {ev.no}: interface {i.id} was changed later")
    for name, before, after in ev.tracked:
        if p.tracked.get(name) != after:
            raise EventNotReversibleHere(f"event {ev.no}: {name!r} was changed later")
        if before is not None and after is None and name in p.tracked:
            raise EventNotReversibleHere(f"event {ev.no}: name {name!r} is taken")


def reverse(p: Presentation, no: int) -> Presentation:
    """Undo event `no`, recording the undo as a surgery of complementary index."""
    ev = p.event(no)
    _check_reversible(p, ev)
    ch = Change(p)
    for piece in ev.added:
        ch.remove_piece(piece.id)
    for i in ev.added_interfaces:
        ch.remove_iface(i.id)
    for piece in ev.removed:
        ch.add_piece(piece)
    for i in ev.removed_interfaces:
        ch.interfaces[i.id] = i
        ch.added_if[i.id] = i
    for name, before, after in ev.tracked:
        ch.track(name, before)
    ch.count(*(-d for d in ev.counter_delta))
    cur = (p.counters.overtwisted, p.counters.ot_cause)
    ot = ev.ot_before if cur == ev.ot_after else cur
    index = {1: 2, 2: 1}.get(ev.index)
    site = {"reverses": ev.no, "of": ev.kind}
    return ch.commit("reversal", index=index, site=site, reverses=ev.no, ot=ot)


# -- reporting -------------------------------------------------------------------

def invariant_report(p: Presentation) -> dict:
    from .lutz import torsion_lower_bound
    census = {}
    for piece in p.pieces.values():
        census[piece.kind] = census.get(piece.kind, 0) + 1
    tori = {}
    for name in sorted(p.tracked):
        ref = p.tracked[name]
        if isinstance(ref, ConvexTorusRef):
            tori[name] = {"slope": ref.ds.slope.text(), "pairs": ref.ds.pairs,
                          "relative_euler": relative_euler(ref.ds), "ds": ref.ds.text()}
    c = p.counters
    return {
        "pieces": len(p.pieces),
        "census": dict(sorted(census.items())),
        "interfaces": len(p.interfaces),
        "tori": tori,
        "overtwisted": c.overtwisted,
        "torsion_half_units": c.torsion_half_units,
        "torsion_lower_bound": torsion_lower_bound(p),
        "simple_lutz_count": c.simple_lutz_count,
        "torus_lutz_count": c.torus_lutz_count,
        "events": [f"{e.no}:{e.kind}" + (f"/{e.index}" if e.index else "") for e in p.events],
    }
