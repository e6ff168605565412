"""The .csc surgery-script language: parsing and pretty-printing.

One statement per line, `#` starts a comment.  Statements:

    manifold s3_std
    knot NAME [nbhd=ANGLE] [framing=MATRIX] [inside=KNOT]
    torus NAME [at=KNOT] [slope=SLOPE] [pairs=N] [meridian=CLASS] [forest=FOREST]
               [separating=yes|no] [angle=ANGLE]
    rsurg1 KNOT KNOT [framing=MATRIX]
    rsurg2 TORUS
    lutz simple|full NAME
    lutz-macro TORUS
    adjust-euler TORUS [target=N]
    reverse EVENT
    report json PATH|-
    render TORUS ascii|svg PATH|-

ANGLE is `k*pi+s` (the angle k*pi + arctan(-s)) or a bare positive rational x,
short for the angle in (0, pi/2) with tangent x.  SLOPE is `p/q`, `p` or `inf`.
MATRIX is `[a b;c d]`.  CLASS is `mu`, `lambda`, `-mu`, `-lambda` or `[a b]`.
FOREST is the dividing-set forest text with no spaces outside braces,
e.g. `0:{-(+)},1:{+}`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from ..dividing import TorusDividingSet, parse_forest
from ..errors import InvalidDividingSet, ScriptSyntaxError, UseBeforeDeclare
from ..slope_calc import BasisChange, Slope, TwistAngle

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
CLASSES = {"mu": (1, 0), "lambda": (0, 1), "-mu": (-1, 0), "-lambda": (0, -1)}


@dataclass(frozen=True)
class Statement:
    kind: str
    args: tuple = ()
    opts: tuple = ()  # sorted (key, value) pairs
    line: int = field(default=0, compare=False)

    def opt(self, key, default=None):
        return dict(self.opts).get(key, default)


@dataclass(frozen=True)
class Script:
    statements: tuple

    def __len__(self):
        return len(self.statements)


# -- values ----------------------------------------------------------------------

def parse_slope(text):
    if text == "inf":
        return Slope(1, 0)
    m = re.fullmatch(r"(-?\d+)(?:/(-?\d+))?", text)
    if not m:
        raise ValueError("slope")
    return Slope(int(m.group(1)), int(m.group(2) or 1))


def parse_angle(text):
    m = re.fullmatch(r"(-?\d+)\*pi\+(.+)", text)
    if m:
        return TwistAngle(int(m.group(1)), parse_slope(m.group(2)))
    x = Fraction(text)
    if x <= 0:
        raise ValueError("angle")
    return TwistAngle(0, Slope(-x.numerator, x.denominator))


def parse_matrix(text):
    m = re.fullmatch(r"\[\s*(-?\d+)\s+(-?\d+)\s*;\s*(-?\d+)\s+(-?\d+)\s*\]", text)
    if not m:
        raise ValueError("matrix")
    return BasisChange(*map(int, m.groups()))


def parse_class(text):
    if text in CLASSES:
        return CLASSES[text]
    m = re.fullmatch(r"\[\s*(-?\d+)\s+(-?\d+)\s*\]", text)
    if not m:
        raise ValueError("class")
    return int(m.group(1)), int(m.group(2))


def parse_bool(text):
    return {"yes": True, "no": False}[text]


def parse_nat(text):
    if not re.fullmatch(r"\d+", text):
        raise ValueError("count")
    return int(text)


def parse_int(text):
    if not re.fullmatch(r"-?\d+", text):
        raise ValueError("integer")
    return int(text)


def fmt_class(c):
    for k, v in CLASSES.items():
        if v == tuple(c):
            return k
    return f"[{c[0]} {c[1]}]"


def fmt_forest(forest):
    return ",".join(f"{i}:{{{' '.join(n.text() for n in roots)}}}"
                    for i, roots in enumerate(forest) if roots)


def _forest_value(text):
    return text  # checked against pairs after all options are read


# key -> (parser, formatter, expected description)
OPTION_TYPES = {
    "nbhd": (parse_angle, TwistAngle.text, "an angle like 1/100 or 0*pi+-1"),
    "angle": (parse_angle, TwistAngle.text, "an angle like 0*pi+-1"),
    "framing": (parse_matrix, BasisChange.text, "a matrix like [1 0;0 1]"),
    "inside": (lambda t: _name(t), str, "a knot name"),
    "at": (lambda t: _name(t), str, "a knot name"),
    "slope": (parse_slope, Slope.text, "a slope like -1, 2/3 or inf"),
    "pairs": (parse_nat, str, "a positive count"),
    "meridian": (parse_class, fmt_class, "mu, lambda, -mu, -lambda or [a b]"),
    "forest": (_forest_value, str, "a forest like 0:{-},1:{+}"),
    "separating": (parse_bool, lambda b: "yes" if b else "no", "yes or no"),
    "target": (parse_int, str, "an integer"),
}

STATEMENT_OPTIONS = {
    "manifold": (), "knot": ("nbhd", "framing", "inside"),
    "torus": ("at", "slope", "pairs", "meridian", "forest", "separating", "angle"),
    "rsurg1": ("framing",), "rsurg2": (), "lutz": (), "lutz-macro": (),
    "adjust-euler": ("target",), "reverse": (), "report": (), "render": (),
}


def _name(text):
    if not NAME_RE.match(text):
        raise ValueError("name")
    return text


# -- tokens ----------------------------------------------------------------------

def _tokens(line, lineno):
    """(column, text) pairs; brackets and braces keep their contents together."""
    out, i, n = [], 0, len(line)
    while i < n:
        if line[i].isspace():
            i += 1
            continue
        if line[i] == "#":
            break
        start, depth = i, 0
        while i < n and (depth > 0 or not (line[i].isspace() or line[i] == "#")):
            if line[i] in "[{":
                depth += 1
            elif line[i] in "]}":
                depth -= 1
            i += 1
        if depth:
            raise ScriptSyntaxError("unbalanced brackets", lineno, start + 1, ("]", "}"))
        out.append((start + 1, line[start:i]))
    return out


# -- parsing ---------------------------------------------------------------------

def _positional(kind, toks, lineno, endcol):
    """Check the positional words of a statement."""
    def need(i, what, check=None, choices=None):
        if i >= len(toks):
            raise ScriptSyntaxError(f"{kind}: missing {what}", lineno, endcol, (what,))
        col, text = toks[i]
        if choices is not None and text not in choices:
            raise ScriptSyntaxError(f"{kind}: unexpected {text!r}", lineno, col, choices)
        if check is not None:
            try:
                return check(text)
            except (ValueError, KeyError):
                raise ScriptSyntaxError(f"{kind}: bad {what} {text!r}", lineno, col, (what,)) from None
        return text

    if kind == "manifold":
        return (need(0, "manifold name", choices=("s3_std",)),)
    if kind in ("knot", "torus", "rsurg2", "lutz-macro", "adjust-euler"):
        return (need(0, "a name", _name),)
    if kind == "rsurg1":
        return need(0, "a knot name", _name), need(1, "a knot name", _name)
    if kind == "lutz":
        return need(0, "simple or full", choices=("simple", "full")), need(1, "a name", _name)
    if kind == "reverse":
        n = need(0, "an event number", parse_nat)
        if n < 1:
            raise ScriptSyntaxError("event numbers start at 1", lineno, toks[0][0], ("an event number",))
        return (n,)
    if kind == "report":
        return need(0, "json", choices=("json",)), need(1, "a path or -")
    if kind == "render":
        return (need(0, "a torus name", _name), need(1, "ascii or svg", choices=("ascii", "svg")),
                need(2, "a path or -"))
    raise AssertionError(kind)


POSITIONAL_COUNT = {"manifold": 1, "knot": 1, "torus": 1, "rsurg1": 2, "rsurg2": 1, "lutz": 2,
                    "lutz-macro": 1, "adjust-euler": 1, "reverse": 1, "report": 2, "render": 3}


def parse_statement(line, lineno):
    toks = _tokens(line, lineno)
    if not toks:
        return None
    col, kind = toks[0]
    if kind not in STATEMENT_OPTIONS:
        raise ScriptSyntaxError(f"unknown statement {kind!r}", lineno, col, tuple(STATEMENT_OPTIONS))
    rest = toks[1:]
    npos = POSITIONAL_COUNT[kind]
    endcol = len(line.rstrip()) + 1
    pos_toks = [t for t in rest[:npos] if "=" not in t[1] or kind in ("report", "render")]
    args = _positional(kind, pos_toks, lineno, endcol)
    opts = {}
    allowed = STATEMENT_OPTIONS[kind]
    for c, text in rest[len(pos_toks):]:
        key, eq, value = text.partition("=")
        if not eq or key not in allowed:
            expected = tuple(f"{k}=" for k in allowed) or ("end of line",)
            raise ScriptSyntaxError(f"{kind}: unexpected {text!r}", lineno, c, expected)
        if key in opts:
            raise ScriptSyntaxError(f"{kind}: {key}= given twice", lineno, c, ())
        parser, _, what = OPTION_TYPES[key]
        try:
            opts[key] = parser(value)
        except (ValueError, KeyError, ZeroDivisionError):
            raise ScriptSyntaxError(f"{kind}: bad value for {key}=", lineno, c + len(key) + 1, (what,)) from None
    if "forest" in opts:
        c = next(c for c, t in rest if t.startswith("forest="))
        try:
            pairs = opts.get("pairs", 1)
            opts["forest"] = TorusDividingSet(pairs, Slope(0, 1), parse_forest(opts["forest"], pairs)).forest
        except InvalidDividingSet as exc:
            raise ScriptSyntaxError(f"torus: {exc}", lineno, c + 7, ("a forest like 0:{-},1:{+}",)) from None
    return Statement(kind, tuple(args), tuple(sorted(opts.items())), lineno)


def parse(text: str) -> Script:
    statements = []
    knots, tori = set(), set()
    for lineno, line in enumerate(text.splitlines(), 1):
        try:
            st = parse_statement(line, lineno)
            if st is None:
                continue
            if not statements and st.kind != "manifold":
                raise ScriptSyntaxError("a script starts with a manifold statement", lineno, 1, ("manifold",))
            if statements and st.kind == "manifold":
                raise ScriptSyntaxError("only one manifold statement is allowed", lineno, 1, ())
            _check_names(st, knots, tori)
        except (ScriptSyntaxError, UseBeforeDeclare) as exc:
            exc.statement = len(statements) + 1
            raise
        statements.append(st)
    if not statements:
        raise ScriptSyntaxError("empty script", 1, 1, ("manifold",))
    return Script(tuple(statements))


def _check_names(st, knots, tori):
    def use(name, pool):
        if name not in pool:
            raise UseBeforeDeclare(name, st.line)

    def declare(name):
        if name in knots or name in tori:
            raise ScriptSyntaxError(f"{name!r} is declared twice", st.line, 1, ())

    if st.kind == "knot":
        if st.opt("inside"):
            use(st.opt("inside"), knots)
        declare(st.args[0])
        knots.add(st.args[0])
    elif st.kind == "torus":
        if st.opt("at"):
            use(st.opt("at"), knots)
        declare(st.args[0])
        tori.add(st.args[0])
    elif st.kind == "rsurg1":
        use(st.args[0], knots)
        use(st.args[1], knots)
    elif st.kind in ("rsurg2", "lutz-macro", "adjust-euler", "render"):
        use(st.args[0], tori)
    elif st.kind == "lutz":
        use(st.args[1], knots | tori)


# -- pretty-printing -------------------------------------------------------------

def format_statement(st: Statement) -> str:
    words = [st.kind] + [str(a) for a in st.args]
    for key, value in st.opts:
        fmt = fmt_forest if key == "forest" else OPTION_TYPES[key][1]
        words.append(f"{key}={fmt(value)}")
    return " ".join(words)


def pretty(script: Script) -> str:
    return "".join(format_statement(st) + "\n" for st in script.statements)
