"""Dividing sets on convex tori and the bypass rewriting system.

A dividing set on T^2 is 2k parallel essential curves of one slope plus a
family of disjoint contractible curves.  The essential curves cut the torus
into 2k annular strips; strip 0 is positive and signs alternate.  Essential
curve i separates strip i from strip i+1 (indices mod 2k).

Contractible curves are kept as a signed forest per strip.  A node's sign is
the sign of the disk region it bounds, which is always opposite to the sign
of the region it sits in, so signs are determined by the nesting and are
validated on construction.

Nodes are addressed by paths (strip, i0, i1, ...) into the canonical
(sorted) forest.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

from .errors import (
    ConfigurationAbsent,
    EulerObstruction,
    InvalidArc,
    InvalidDividingSet,
)
from .slope_calc import Slope, change_basis, BasisChange


@dataclass(frozen=True)
class Node:
    sign: int
    children: tuple["Node", ...] = ()

    def text(self) -> str:
        head = "+" if self.sign > 0 else "-"
        if not self.children:
            return head
        return head + "(" + " ".join(c.text() for c in self.children) + ")"

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)


def _canon_nodes(nodes) -> tuple[Node, ...]:
    nodes = [Node(n.sign, _canon_nodes(n.children)) for n in nodes]
    return tuple(sorted(nodes, key=Node.text))


def strip_sign(strip: int) -> int:
    return 1 if strip % 2 == 0 else -1


@dataclass(frozen=True)
class TorusDividingSet:
    pairs: int
    slope: Slope
    forest: tuple[tuple[Node, ...], ...] = None

    def __post_init__(self):
        if self.pairs < 1:
            raise InvalidDividingSet("a dividing set on T^2 needs at least 2 essential curves")
        forest = self.forest
        if forest is None:
            forest = ((),) * (2 * self.pairs)
        if len(forest) != 2 * self.pairs:
            raise InvalidDividingSet(
                f"forest has {len(forest)} strips, expected {2 * self.pairs}")
        forest = tuple(_canon_nodes(roots) for roots in forest)
        for i, roots in enumerate(forest):
            for node in roots:
                _check_signs(node, -strip_sign(i))
        object.__setattr__(self, "forest", forest)

    @classmethod
    def essential(cls, pairs: int = 1, slope: Slope = Slope(0, 1)) -> "TorusDividingSet":
        return cls(pairs, slope)

    @property
    def strips(self) -> int:
        return 2 * self.pairs

    def contractible_count(self) -> int:
        return sum(n.size() for roots in self.forest for n in roots)

    def nested_pair_count(self) -> int:
        """Number of (parent, child) pairs among contractible curves."""
        def count(n):
            return len(n.children) + sum(count(c) for c in n.children)
        return sum(count(n) for roots in self.forest for n in roots)

    def node(self, path) -> Node:
        strip, *idx = path
        if not 0 <= strip < self.strips or not idx:
            raise ConfigurationAbsent(f"no contractible curve at {tuple(path)}")
        nodes = self.forest[strip]
        node = None
        for i in idx:
            if not 0 <= i < len(nodes):
                raise ConfigurationAbsent(f"no contractible curve at {tuple(path)}")
            node = nodes[i]
            nodes = node.children
        return node

    def paths(self):
        """All node paths, strips ascending, depth-first."""
        def walk(prefix, nodes):
            for i, n in enumerate(nodes):
                yield prefix + (i,)
                yield from walk(prefix + (i,), n.children)
        for s, roots in enumerate(self.forest):
            yield from walk((s,), roots)

    def text(self) -> str:
        parts = [f"{i}:{{{' '.join(n.text() for n in roots)}}}"
                 for i, roots in enumerate(self.forest) if roots]
        return f"DS(pairs={self.pairs}, slope={self.slope}, forest=[{', '.join(parts)}])"

    def __str__(self):
        return self.text()


def _check_signs(node: Node, expected: int):
    if node.sign != expected:
        raise InvalidDividingSet(
            f"contractible curve of sign {node.sign:+d} in a region of the same sign")
    for c in node.children:
        _check_signs(c, -expected)


# -- text form -----------------------------------------------------------------

_DS_RE = re.compile(
    r"^DS\(pairs=(?P<pairs>\d+),\s*slope=(?P<slope>-?\d+/\d+|inf),\s*forest=\[(?P<forest>.*)\]\)$")


def parse_forest(text: str, pairs: int):
    """Parse 'i:{+ -(+)}, j:{...}' into a per-strip tuple of nodes."""
    forest = [[] for _ in range(2 * pairs)]
    text = text.strip()
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(text) and text[pos] in " ,":
            pos += 1

    def node_list(sign_of_region):
        nonlocal pos
        nodes = []
        while True:
            skip_ws()
            if pos >= len(text) or text[pos] not in "+-":
                return nodes
            sign = 1 if text[pos] == "+" else -1
            pos += 1
            children = []
            if pos < len(text) and text[pos] == "(":
                pos += 1
                children = node_list(sign)
                skip_ws()
                if pos >= len(text) or text[pos] != ")":
                    raise InvalidDividingSet(f"unbalanced parentheses in forest {text!r}")
                pos += 1
            nodes.append(Node(sign, tuple(children)))

    while True:
        skip_ws()
        if pos >= len(text):
            break
        m = re.match(r"(\d+):\{", text[pos:])
        if not m:
            raise InvalidDividingSet(f"bad forest text at {text[pos:]!r}")
        strip = int(m.group(1))
        pos += m.end()
        if strip >= 2 * pairs:
            raise InvalidDividingSet(f"strip {strip} out of range for {pairs} pairs")
        forest[strip].extend(node_list(None))
        skip_ws()
        if pos >= len(text) or text[pos] != "}":
            raise InvalidDividingSet(f"unterminated strip in forest {text!r}")
        pos += 1
    return tuple(tuple(r) for r in forest)


def parse_ds(text: str) -> TorusDividingSet:
    m = _DS_RE.match(text.strip())
    if not m:
        raise InvalidDividingSet(f"not a dividing-set text: {text!r}")
    pairs = int(m.group("pairs"))
    return TorusDividingSet(pairs, Slope.parse(m.group("slope")),
                            parse_forest(m.group("forest"), pairs))


# -- Euler characteristic bookkeeping ------------------------------------------

@dataclass(frozen=True)
class RegionEuler:
    chi_plus: int
    chi_minus: int


def region_euler(ds: TorusDividingSet) -> RegionEuler:
    chi = {1: 0, -1: 0}

    def visit(node: Node):
        # the disk bounded by node, minus the disks of its children
        chi[node.sign] += 1 - len(node.children)
        for c in node.children:
            visit(c)

    for i, roots in enumerate(ds.forest):
        chi[strip_sign(i)] -= len(roots)  # annulus minus disks
        for n in roots:
            visit(n)
    return RegionEuler(chi[1], chi[-1])


def relative_euler(ds: TorusDividingSet) -> int:
    e = region_euler(ds)
    return e.chi_plus - e.chi_minus


def giroux_overtwisted(ds: TorusDividingSet) -> bool:
    return any(ds.forest)


# -- bypass attachment ---------------------------------------------------------

BYPASS_KINDS = ("parallel", "wrap", "cancel", "create", "nested")


@dataclass(frozen=True)
class BypassArc:
    """Where a bypass is attached.

    kind       which of the local pictures the arc meets:
      parallel  three consecutive essential curves curve, curve+1, curve+2
      wrap      the two essential curves of a single pair (crosses one twice);
                arc_slope is the slope the arc closes up to
      cancel    root `path`, essential curve `curve`, root `other`
      create    zig-zag across essential curve `curve`
      nested    node `path` (inner), its parent, then the parent's enclosing
                curve (essential curve `curve` when the parent is a root)
    side       'front' or 'back' of the surface
    """

    kind: str
    curve: int = 0
    path: tuple = ()
    other: tuple = ()
    arc_slope: Slope | None = None
    side: str = "front"

    def text(self) -> str:
        bits = [self.kind, f"curve={self.curve}"]
        if self.path:
            bits.append("path=" + ".".join(map(str, self.path)))
        if self.other:
            bits.append("other=" + ".".join(map(str, self.other)))
        if self.arc_slope is not None:
            bits.append(f"arc_slope={self.arc_slope}")
        bits.append(self.side)
        return " ".join(bits)


def _thaw(nodes):
    return [[n.sign, _thaw(n.children)] for n in nodes]


def _freeze(nodes):
    return tuple(Node(s, _freeze(ch)) for s, ch in nodes)


def _locate(forest, path):
    """(container list, index) of the mutable node at path."""
    strip, *idx = path
    container = forest[strip]
    for depth, i in enumerate(idx):
        if depth == len(idx) - 1:
            return container, i
        container = container[i][1]
    raise ConfigurationAbsent("empty path")


def bypass_attach(ds: TorusDividingSet, arc: BypassArc) -> TorusDividingSet:
    if arc.kind not in BYPASS_KINDS:
        raise InvalidArc(f"unknown bypass configuration {arc.kind!r}")
    if arc.side not in ("front", "back"):
        raise InvalidArc(f"side must be front or back, not {arc.side!r}")
    n = ds.strips
    if not 0 <= arc.curve < n:
        raise InvalidArc(f"essential curve {arc.curve} does not exist")
    try:
        if arc.path:
            ds.node(arc.path)
        if arc.other:
            ds.node(arc.other)
    except ConfigurationAbsent as exc:
        raise InvalidArc(str(exc)) from None
    return _REWRITES[arc.kind](ds, arc)


def _rewrite_parallel(ds, arc):
    n = ds.strips
    if ds.pairs < 2:
        raise InvalidArc("three distinct essential curves need at least two pairs")
    i = arc.curve
    forest = [list(r) for r in ds.forest]
    # regions along the arc: strips i, i+1, i+2, i+3; the first and third merge,
    # and the second and fourth
    a, b, c, d = i % n, (i + 1) % n, (i + 2) % n, (i + 3) % n
    forest[a] += forest[c]
    forest[d] += forest[b]
    keep = [j for j in range(n) if j not in (b, c)]
    start = next(k for k, j in enumerate(keep) if j % 2 == 0)
    order = keep[start:] + keep[:start]
    return TorusDividingSet(ds.pairs - 1, ds.slope, tuple(tuple(forest[j]) for j in order))


def wrap_result_slope(s: Slope, r: Slope, side: str) -> Slope:
    """New essential slope after a bypass on a single pair of curves of slope s
    along an arc closing up with slope r (a Farey neighbour of s)."""
    if s.farey_distance(r) != 1:
        raise InvalidArc(f"arc slope {r} is not a Farey neighbour of {s}")
    if side == "front":
        return r
    rp, rq = r.p, r.q
    if s.p * rq - s.q * rp == 1:
        rp, rq = -rp, -rq
    return Slope(s.p + rp, s.q + rq)


def _rewrite_wrap(ds, arc):
    if ds.pairs != 1:
        raise InvalidArc("a wrapping arc meets three curves only when there is one pair")
    if arc.arc_slope is None:
        raise InvalidArc("wrap arcs need arc_slope")
    return replace(ds, slope=wrap_result_slope(ds.slope, arc.arc_slope, arc.side))


def _rewrite_cancel(ds, arc):
    n = ds.strips
    i = arc.curve
    if len(arc.path) != 2 or len(arc.other) != 2:
        raise InvalidArc("cancel arcs join two outermost contractible curves")
    if {arc.path[0], arc.other[0]} != {i, (i + 1) % n}:
        raise InvalidArc(f"curves at {arc.path} and {arc.other} are not separated by curve {i}")
    if arc.path[0] == i:
        a, b = arc.path, arc.other
    else:
        a, b = arc.other, arc.path
    forest = [_thaw(r) for r in ds.forest]
    node_a = forest[a[0]][a[1]]
    node_b = forest[b[0]][b[1]]
    # inside of a merges with the strip across the curve, and vice versa
    forest[a[0]] = [x for x in forest[a[0]] if x is not node_a] + node_b[1]
    forest[b[0]] = [x for x in forest[b[0]] if x is not node_b] + node_a[1]
    return replace(ds, forest=tuple(_freeze(r) for r in forest))


def _rewrite_create(ds, arc):
    n = ds.strips
    i = arc.curve
    j = (i + 1) % n
    forest = [list(r) for r in ds.forest]
    forest[i].append(Node(-strip_sign(i)))
    forest[j].append(Node(-strip_sign(j)))
    return replace(ds, forest=tuple(tuple(r) for r in forest))


def _rewrite_nested(ds, arc):
    n = ds.strips
    path = tuple(arc.path)
    if len(path) < 3:
        raise InvalidArc("nested arcs need an inner curve inside another contractible curve")
    inner_path, outer_path = path, path[:-1]
    forest = [_thaw(r) for r in ds.forest]
    outer_container, oi = _locate(forest, outer_path)
    outer = outer_container[oi]
    inner = outer[1][inner_path[-1]]
    rest_of_outer = [x for x in outer[1] if x is not inner]
    if len(outer_path) == 2:
        strip = outer_path[0]
        if arc.curve == strip:
            across = (strip + 1) % n
        elif arc.curve == (strip - 1) % n:
            across = (strip - 1) % n
        else:
            raise InvalidArc(f"essential curve {arc.curve} does not bound strip {strip}")
        forest[strip] = [x for x in forest[strip] if x is not outer] + inner[1]
        forest[across] = forest[across] + rest_of_outer
    else:
        host_container, hi = _locate(forest, outer_path[:-1])
        host = host_container[hi]
        host[1] = [x for x in host[1] if x is not outer] + inner[1]
        host_container.extend(rest_of_outer)
    return replace(ds, forest=tuple(_freeze(r) for r in forest))


_REWRITES = {
    "parallel": _rewrite_parallel,
    "wrap": _rewrite_wrap,
    "cancel": _rewrite_cancel,
    "create": _rewrite_create,
    "nested": _rewrite_nested,
}


# -- macros --------------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    """One macro application, replayable with apply_step."""

    op: str
    strip: int = 0
    path: tuple = ()
    other: tuple = ()
    hops: int = 0
    bypasses: tuple = field(default=(), compare=False)

    def to_dict(self):
        d = {"op": self.op}
        if self.op in ("op_I", "op_III"):
            d["strip" if self.op == "op_I" else "curve"] = self.strip
        if self.path:
            d["path"] = list(self.path)
        if self.other:
            d["other"] = list(self.other)
        if self.op == "transport":
            d["hops"] = self.hops
        d["bypasses"] = [b.text() for b in self.bypasses]
        return d


def op_I_create(ds: TorusDividingSet, strip: int, side: str = "front"):
    if not 0 <= strip < ds.strips:
        raise ConfigurationAbsent(f"no strip {strip}")
    arc = BypassArc("create", curve=strip, side=side)
    return bypass_attach(ds, arc), Step("op_I", strip=strip, bypasses=(arc,))


def op_II_cancel(ds: TorusDividingSet, pair, side: str = "front"):
    a, b = (tuple(x) for x in pair)
    n = ds.strips
    for p in (a, b):
        if len(p) != 2:
            raise ConfigurationAbsent(f"{p} is not an outermost contractible curve")
        ds.node(p)
    if (b[0] - a[0]) % n == 1:
        curve = a[0]
    elif (a[0] - b[0]) % n == 1:
        curve = b[0]
    else:
        raise ConfigurationAbsent(f"curves at {a} and {b} are not in adjacent strips")
    arc = BypassArc("cancel", curve=curve, path=a, other=b, side=side)
    return bypass_attach(ds, arc), Step("op_II", path=a, other=b, bypasses=(arc,))


def op_III(ds: TorusDividingSet, curve: int, side: str = "front"):
    if ds.pairs < 2:
        raise ConfigurationAbsent("op III needs at least two pairs of essential curves")
    if not 0 <= curve < ds.strips:
        raise ConfigurationAbsent(f"no essential curve {curve}")
    arc = BypassArc("parallel", curve=curve, side=side)
    return bypass_attach(ds, arc), Step("op_III", strip=curve, bypasses=(arc,))


def op_IV_cancel_nested(ds: TorusDividingSet, node, side: str = "front"):
    """Cancel the nested pair formed by the curve at `node` and its parent."""
    path = tuple(node)
    if len(path) < 3:
        raise ConfigurationAbsent(f"{path} has no enclosing contractible curve")
    ds.node(path)
    arc = BypassArc("nested", curve=path[0], path=path, side=side)
    return bypass_attach(ds, arc), Step("op_IV", path=path, bypasses=(arc,))


def transport(ds: TorusDividingSet, path, side: str = "front"):
    """Move an innermost contractible curve to the next strip of the same sign
    (two strips on): create a pair across the far curve, cancel against the near one."""
    path = tuple(path)
    if len(path) != 2:
        raise ConfigurationAbsent(f"{path} is not an outermost contractible curve")
    node = ds.node(path)
    if node.children:
        raise ConfigurationAbsent(f"{path} still encloses other curves")
    n = ds.strips
    if n == 2:
        raise ConfigurationAbsent("with a single pair the other strip of the same sign is itself")
    strip = path[0]
    near = (strip + 1) % n
    created, s1 = op_I_create(ds, near, side)
    # the fresh leaf in the near strip; leaves are interchangeable
    j = created.forest[near].index(Node(-strip_sign(near)))
    moved = created.forest[strip].index(node)
    result, s2 = op_II_cancel(created, ((strip, moved), (near, j)), side)
    return result, Step("transport", path=path, hops=1, bypasses=s1.bypasses + s2.bypasses)


def transport_hops(ds: TorusDividingSet, path, hops: int, side: str = "front"):
    """Carry the leaf at path `hops` times two strips forward."""
    path = tuple(path)
    leaf = ds.node(path)
    n = ds.strips
    strip, bypasses = path[0], ()
    for _ in range(hops):
        ds, step = transport(ds, (strip, ds.forest[strip].index(leaf)), side)
        bypasses += step.bypasses
        strip = (strip + 2) % n
    return ds, Step("transport", path=path, hops=hops, bypasses=bypasses)


def apply_step(ds: TorusDividingSet, step: Step) -> TorusDividingSet:
    if step.op == "op_I":
        return op_I_create(ds, step.strip)[0]
    if step.op == "op_II":
        return op_II_cancel(ds, (step.path, step.other))[0]
    if step.op == "op_III":
        return op_III(ds, step.strip)[0]
    if step.op == "op_IV":
        return op_IV_cancel_nested(ds, step.path)[0]
    if step.op == "transport":
        return transport_hops(ds, step.path, step.hops)[0]
    raise ValueError(f"unknown step {step.op!r}")


def replay(ds: TorusDividingSet, trace) -> TorusDividingSet:
    for step in trace:
        ds = apply_step(ds, step)
    return ds


def transport_distance(ds: TorusDividingSet) -> int:
    """Total number of two-strip hops still needed to gather leaves into strips 0 and 1."""
    n = ds.strips
    total = 0
    for i, roots in enumerate(ds.forest):
        target = 0 if i % 2 == 0 else 1
        total += len(roots) * (((target - i) % n) // 2)
    return total


def normalization_measure(ds: TorusDividingSet) -> tuple[int, int, int]:
    return ds.nested_pair_count(), ds.contractible_count(), transport_distance(ds)


def normalize(ds: TorusDividingSet):
    """Remove every contractible dividing curve.

    Nested pairs go first, then each remaining curve is carried to strip 0
    (negative disks) or strip 1 (positive disks), and the two groups are
    cancelled against each other pairwise.  Returns (result, trace).
    """
    if relative_euler(ds) != 0:
        raise EulerObstruction(
            f"relative Euler number {relative_euler(ds)} != 0; the torus does not admit index-2 surgery")
    trace = []
    while ds.nested_pair_count():
        path = next(p for p in ds.paths() if len(p) >= 3)
        ds, step = op_IV_cancel_nested(ds, path)
        trace.append(step)
    n = ds.strips
    if n > 2:
        for strip in range(n):
            target = 0 if strip % 2 == 0 else 1
            while strip != target and ds.forest[strip]:
                hops = ((target - strip) % n) // 2
                ds, step = transport_hops(ds, (strip, 0), hops)
                trace.append(step)
    while ds.forest[0] and ds.forest[1]:
        ds, step = op_II_cancel(ds, ((0, 0), (1, 0)))
        trace.append(step)
    assert not giroux_overtwisted(ds), "balanced leaves must cancel completely"
    return ds, trace


def transform(ds: TorusDividingSet, g: BasisChange) -> TorusDividingSet:
    """The same dividing set read in another basis of H_1(T^2)."""
    return replace(ds, slope=change_basis(ds.slope, g))
