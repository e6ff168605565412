"""Random surgery scripts on the standard sphere, each undone event by event.

    python3 scripts/random_reversal.py [--scripts 100] [--surgeries 10] [--seed 0]
"""

import argparse
import time
from collections import Counter

from contact_surgery.experiments import RandomScriptConfig, random_presentation, reverse_all
from contact_surgery.surgery import standard_sphere, state_json


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scripts", type=int, default=100)
    ap.add_argument("--surgeries", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    start = state_json(standard_sphere())
    kinds, failures, worst = Counter(), [], 0.0
    for i in range(args.scripts):
        cfg = RandomScriptConfig(surgeries=args.surgeries, seed=args.seed + i)
        t = time.perf_counter()
        p = random_presentation(cfg)
        back = reverse_all(p)
        worst = max(worst, time.perf_counter() - t)
        kinds.update(e.kind for e in p.events)
        if state_json(back) != start:
            failures.append(cfg.seed)
    print(f"scripts: {args.scripts}, failures: {failures or 'none'}, slowest: {worst * 1000:.1f} ms")
    print("events per kind:", dict(sorted(kinds.items())))


if __name__ == "__main__":
    main()
