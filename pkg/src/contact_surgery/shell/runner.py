"""Execute a parsed script against the surgery engine and build the report."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

from ..dividing import relative_euler
from ..errors import CalculusError
from ..lutz import (
    adjust_relative_euler, full_lutz_knot, lutz_as_round_surgeries, lutz_torus,
    simple_lutz_knot, torsion_lower_bound,
)
from ..slope_calc import DEFAULT_KNOT_ANGLE, IDENTITY
from ..surgery import (
    ConvexTorusRef, approximate_transverse, canonical_form, declare_torus, dumps,
    reverse, round_surgery_1, round_surgery_2, standard_sphere,
)
from .render import render_dividing_set
from .script import Script, Statement, format_statement

SCHEMA = "contact-surgery-report/1"


class ScriptError(CalculusError):
    """An engine error raised while executing statement `statement`."""

    def __init__(self, statement: int, line: int, events: int, cause: Exception):
        self.statement = statement
        self.line = line
        self.events = events
        self.cause = cause
        super().__init__(f"statement {statement} (line {line}), after event {events}: "
                         f"{type(cause).__name__}: {cause}")


@dataclass
class RunContext:
    """Where `report` and `render` statements write.  Paths are relative to base."""
    base: Path = Path(".")
    stdout: object = None
    files: dict = field(default_factory=dict)  # path -> text, also written to disk when write=True
    write: bool = True

    def emit(self, target, text):
        if target == "-":
            (self.stdout or sys.stdout).write(text)
            return
        path = self.base / target
        self.files[str(path)] = text
        if self.write:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")


def report(p, log=()) -> dict:
    tori = {}
    for name in sorted(p.tracked):
        ref = p.tracked[name]
        if isinstance(ref, ConvexTorusRef):
            tori[name] = {"slope": ref.ds.slope.text(), "pairs": ref.ds.pairs,
                          "relative_euler": relative_euler(ref.ds), "ds": ref.ds.text()}
    trace = [{"event": e.no, "steps": [s.to_dict() for s in e.trace]} for e in p.events if e.trace]
    c = p.counters
    return {
        "schema": SCHEMA,
        "pieces": [p.pieces[k].to_dict() for k in sorted(p.pieces)],
        "interfaces": [p.interfaces[k].to_dict() for k in sorted(p.interfaces)],
        "tracked": {k: p.tracked[k].to_dict() for k in sorted(p.tracked)},
        "events": [e.to_dict() for e in p.events],
        "counters": {**c.to_dict(), "torsion_lower_bound": torsion_lower_bound(p)},
        "tori": tori,
        "trace": trace,
        "log": list(log),
    }


def report_json(p, log=()) -> str:
    return dumps(report(p, log)) + "\n"


def _step(p, st: Statement, log, ctx):
    kind, a = st.kind, st.args
    if kind == "manifold":
        return standard_sphere()
    if kind == "knot":
        p, _ = approximate_transverse(p, a[0], st.opt("nbhd", DEFAULT_KNOT_ANGLE),
                                      st.opt("framing", IDENTITY), inside=st.opt("inside"))
    elif kind == "torus":
        p, _ = declare_torus(p, a[0], at=st.opt("at"), slope=st.opt("slope"), pairs=st.opt("pairs"),
                             forest=st.opt("forest"), meridian=st.opt("meridian"),
                             separating=st.opt("separating"), angle=st.opt("angle"))
    elif kind == "rsurg1":
        p = round_surgery_1(p, a[0], a[1], st.opt("framing", IDENTITY))
    elif kind == "rsurg2":
        p = round_surgery_2(p, a[0])
        steps = len(p.events[-1].trace)
        log.append(f"rsurg2 {a[0]}: normalization took {steps} step(s)")
    elif kind == "lutz":
        mode, name = a
        if isinstance(p.tracked.get(name), ConvexTorusRef):
            p = lutz_torus(p, name, 1 if mode == "simple" else 2)
        elif mode == "simple":
            p = simple_lutz_knot(p, name)
        else:
            p = full_lutz_knot(p, name)
    elif kind == "lutz-macro":
        before = p
        p, events = lutz_as_round_surgeries(p, a[0])
        same = canonical_form(p) == canonical_form(lutz_torus(before, a[0], 1))
        log.append(f"lutz-macro {a[0]}: surgeries "
                   + ", ".join(f"{e.no}:{e.kind}/{e.index}" for e in events)
                   + f"; canonical form {'equals' if same else 'differs from'} lutz simple {a[0]}")
    elif kind == "adjust-euler":
        p = adjust_relative_euler(p, a[0], st.opt("target", 0))
    elif kind == "reverse":
        p = reverse(p, a[0])
    elif kind == "report":
        ctx.emit(a[1], report_json(p, log))
    elif kind == "render":
        ctx.emit(a[2], render_dividing_set(p.torus(a[0]).ds, a[1]))
    return p


def execute(script: Script, ctx: RunContext | None = None, trace=None):
    """Run every statement.  Returns (presentation, report dict).
    trace, when given, is called with one line per statement."""
    ctx = ctx or RunContext()
    p = standard_sphere()
    log = []
    for i, st in enumerate(script.statements, 1):
        try:
            p = _step(p, st, log, ctx)
        except CalculusError as exc:
            raise ScriptError(i, st.line, len(p.events), exc) from exc
        if trace is not None:
            trace(f"[{i}] {format_statement(st)} -> {len(p.events)} events")
    return p, report(p, log)
