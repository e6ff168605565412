"""Print the event-by-event ledger of the four-surgery Lutz twist next to the
direct twist, for the model window and for every Farey slope up to a level.

    python3 scripts/lutz_macro_trace.py [--level 3]
"""

import argparse
import math

from contact_surgery.lutz import lutz_as_round_surgeries, lutz_torus
from contact_surgery.slope_calc import QUARTER_PI, BasisChange, Slope, extend_to_basis
from contact_surgery.surgery import (
    approximate_transverse, canonical_form, declare_torus, dumps, standard_sphere,
)


def window(framing):
    p, _ = approximate_transverse(standard_sphere(), "K", QUARTER_PI, framing)
    p, _ = declare_torus(p, "T", at="K", meridian=(0, 1))
    return p


def framing_for(s):
    c, a = extend_to_basis((s.q, s.p))
    return BasisChange(a, s.p + a, c, s.q + c)


def describe(ev):
    kinds = lambda xs: ",".join(f"{x.id}:{x.kind}" for x in xs) or "-"
    return f"{ev.no:>3} {ev.kind:<8} {ev.index or '':<2} -[{kinds(ev.removed)}] +[{kinds(ev.added)}]"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--level", type=int, default=3)
    args = ap.parse_args()
    p = window(BasisChange(1, 0, 0, 1))
    q, surgeries = lutz_as_round_surgeries(p, "T")
    for ev in q.events[len(p.events):]:
        print(describe(ev))
    print("canonical form:")
    print(dumps(canonical_form(q)))
    ok = 0
    slopes = sorted({Slope(a, b) for b in range(args.level + 1) for a in range(-args.level * max(b, 1), args.level * max(b, 1) + 1)
                     if (a, b) != (0, 0) and math.gcd(a, b) == 1}, key=lambda s: (s.q, s.p))
    for s in slopes:
        p = window(framing_for(s))
        q, events = lutz_as_round_surgeries(p, "T")
        ok += len(events) == 4 and canonical_form(q) == canonical_form(lutz_torus(p, "T", 1))
    print(f"slopes checked: {len(slopes)}, equal to the direct twist: {ok}")


if __name__ == "__main__":
    main()
