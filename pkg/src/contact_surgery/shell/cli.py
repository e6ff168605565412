"""contact-surgery command line.

    contact-surgery run SCRIPT [--json OUT] [--render DIR] [--trace]
    contact-surgery check SCRIPT
    contact-surgery demo lutz|reverse|euler

Exit status: 0 on success, 1 on a script error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from ..errors import CalculusError, MacroPostconditionFailed
from ..surgery import dumps
from .render import render_dividing_set
from .runner import RunContext, ScriptError, execute
from .script import parse

DEMOS = {"lutz": "lutz_equiv.csc", "reverse": "round_trip.csc", "euler": "euler_adjust.csc"}


def demo_text(name: str) -> str:
    return resources.files(__package__).joinpath("fixtures", DEMOS[name]).read_text(encoding="utf-8")


def _load(path):
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _run(args, out, err):
    script = parse(_load(args.script))
    base = Path(args.script).parent if args.script != "-" else Path(".")
    ctx = RunContext(base=base, stdout=out)
    trace = (lambda line: print(line, file=err)) if args.trace else None
    p, rep = execute(script, ctx, trace=trace)
    if args.json:
        text = dumps(rep) + "\n"
        if args.json == "-":
            out.write(text)
        else:
            Path(args.json).write_text(text, encoding="utf-8")
    if args.render:
        d = Path(args.render)
        d.mkdir(parents=True, exist_ok=True)
        for name in sorted(p.tracked):
            ref = p.tracked[name]
            if getattr(ref, "kind", None) == "torus" and not name.startswith("#"):
                (d / f"{name}.txt").write_text(render_dividing_set(ref.ds, "ascii"), encoding="utf-8")
                (d / f"{name}.svg").write_text(render_dividing_set(ref.ds, "svg"), encoding="utf-8")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="contact-surgery", description="Run contact round-surgery scripts.")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="execute a script")
    run.add_argument("script")
    run.add_argument("--json", metavar="OUT", help="write the final report (- for standard output)")
    run.add_argument("--render", metavar="DIR", help="draw every tracked torus into DIR")
    run.add_argument("--trace", action="store_true", help="print one line per statement to stderr")
    check = sub.add_parser("check", help="parse a script without running it")
    check.add_argument("script")
    demo = sub.add_parser("demo", help="print a bundled script")
    demo.add_argument("name", choices=sorted(DEMOS))
    return ap


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "demo":
            out.write(demo_text(args.name))
            return 0
        if args.command == "check":
            script = parse(_load(args.script))
            print(f"{args.script}: {len(script)} statements", file=out)
            return 0
        return _run(args, out, err)
    except (CalculusError, MacroPostconditionFailed) as exc:
        where = getattr(exc, "statement", None)
        prefix = f"statement {where}, " if where and not isinstance(exc, ScriptError) else ""
        print(f"error: {prefix}{exc}", file=err)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return 1


if __name__ == "__main__":
    sys.exit(main())
