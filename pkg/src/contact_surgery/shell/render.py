"""Diagrams of a dividing set on the flattened torus square.

The square is [0,1]^2 with mu horizontal and lambda vertical.  The 2k
essential curves of slope p/q are drawn as parallel lines; curve i sits at
offset (4i + 3)/(8kq) and strip j lies between curves j-1 and j, so its
midline has offset (4j + 1)/(8kq).  The quarter-strip shift keeps lines and
labels off the edge of the square.  Contractible curves are drawn on the midline of
their strip, one circle per node, children inside their parent.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ..dividing import bypass_attach
from ..errors import UnsupportedSlope

GRID = 41
ASCII_LIMIT = 40
SVG_SIZE = 400
EMPTY = "."


def _offsets(ds):
    n = ds.strips
    q = ds.slope.q or 1
    curves = [Fraction(4 * i + 3, 4 * n * q) for i in range(n)]
    midlines = [Fraction(4 * j + 1, 4 * n * q) for j in range(n)]
    return curves, midlines


def _point(slope, offset, t):
    """Point at parameter t in [0,1] along the closed curve through `offset`,
    unwrapped (not reduced mod 1)."""
    p, q = slope.p, slope.q
    if q == 0:
        return offset, t * abs(p)
    return t * q, offset + t * p


def segments(slope, offset):
    """The closed curve cut into straight pieces inside the unit square."""
    p, q = slope.p, slope.q
    cuts = {Fraction(0), Fraction(1)}
    span_x, span_y = (0, abs(p)) if q == 0 else (q, p)
    x0, y0 = _point(slope, Fraction(offset), Fraction(0))
    for start, span in ((x0, span_x), (y0, span_y)):
        if span:
            lo, hi = sorted((start, start + span))
            k = math.floor(lo) + 1
            while k < hi:
                cuts.add((k - start) / span)
                k += 1
    cuts = sorted(cuts)
    out = []
    for a, b in zip(cuts, cuts[1:]):
        mid = _point(slope, Fraction(offset), (a + b) / 2)
        fx, fy = int(mid[0] // 1), int(mid[1] // 1)
        pa = _point(slope, Fraction(offset), a)
        pb = _point(slope, Fraction(offset), b)
        out.append(((pa[0] - fx, pa[1] - fy), (pb[0] - fx, pb[1] - fy)))
    return out


def _circle_text(node):
    return "(" + ("+" if node.sign > 0 else "-") + "".join(_circle_text(c) for c in node.children) + ")"


def _root_anchor(slope, midline, k, n):
    """Where root k of n sits on a strip's midline, reduced into the square."""
    t = Fraction(k + 1, n + 1)
    x, y = _point(slope, midline, t / (slope.q or 1) if slope.q else t / abs(slope.p))
    return x % 1, y % 1


def _line_char(slope):
    if slope.q == 0:
        return "|"
    v = Fraction(slope.p, slope.q)
    if abs(v) <= Fraction(1, 2):
        return "-"
    if abs(v) >= 2:
        return "|"
    return "/" if v > 0 else "\\"


def render_ascii(ds) -> str:
    s = ds.slope
    if abs(s.p) > ASCII_LIMIT or abs(s.q) > ASCII_LIMIT:
        raise UnsupportedSlope(f"slope {s.text()} is too fine for a {GRID}x{GRID} grid")
    grid = [[EMPTY] * GRID for _ in range(GRID)]
    last = GRID - 1

    def cell(x, y):
        return min(last, max(0, round(x * last))), min(last, max(0, round((1 - y) * last)))

    ch = _line_char(s)
    curves, midlines = _offsets(ds)
    for off in curves:
        for a, b in segments(s, off):
            steps = 4 * GRID
            for i in range(steps + 1):
                t = Fraction(i, steps)
                col, row = cell(a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)
                grid[row][col] = ch
    for j, roots in enumerate(ds.forest):
        for k, node in enumerate(roots):
            x, y = _root_anchor(s, midlines[j], k, len(roots))
            label = _circle_text(node)
            col, row = cell(x, y)
            start = min(max(0, col - len(label) // 2), GRID - len(label))
            for i, c in enumerate(label[:GRID]):
                grid[row][start + i] = c
    header = ds.text()
    return header + "\n" + "".join("".join(r) + "\n" for r in grid)


# -- svg ---------------------------------------------------------------------------

def _f(v):
    return f"{float(v):.3f}"


def _svg_circles(node, cx, cy, r, out):
    cls = "pos" if node.sign > 0 else "neg"
    out.append(f'<circle class="{cls}" cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}"/>')
    m = len(node.children)
    if not m:
        return
    cr = r * 0.8 / m
    for i, child in enumerate(node.children):
        dx = (2 * i - (m - 1)) * cr
        _svg_circles(child, cx + dx, cy, cr * 0.85, out)


def render_svg(ds) -> str:
    s = ds.slope
    size = SVG_SIZE
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f"<title>{ds.text()}</title>",
        "<style>line{stroke:#222;stroke-width:2}circle{fill:none;stroke-width:1.5}"
        ".pos{stroke:#c0392b}.neg{stroke:#2060b0}</style>",
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="#fafafa" stroke="#888"/>',
    ]
    curves, midlines = _offsets(ds)
    for off in curves:
        for a, b in segments(s, off):
            out.append(f'<line x1="{_f(a[0] * size)}" y1="{_f((1 - a[1]) * size)}" '
                       f'x2="{_f(b[0] * size)}" y2="{_f((1 - b[1]) * size)}"/>')
    norm = (s.p * s.p + s.q * s.q) ** 0.5
    width = size / (ds.strips * norm)
    for j, roots in enumerate(ds.forest):
        n = len(roots)
        for k, node in enumerate(roots):
            x, y = _root_anchor(s, midlines[j], k, n)
            r = min(0.35 * width, 0.4 * size / (n + 1))
            _svg_circles(node, x * size, (1 - y) * size, r, out)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_dividing_set(ds, fmt: str = "ascii") -> str:
    if fmt == "ascii":
        return render_ascii(ds)
    if fmt == "svg":
        return render_svg(ds)
    raise ValueError(f"unknown format {fmt!r}")


def trace_frames(ds, trace):
    """The dividing set before the trace and after each of its bypasses."""
    frames = [ds]
    for step in trace:
        for arc in step.bypasses:
            ds = bypass_attach(ds, arc)
            frames.append(ds)
    return frames
