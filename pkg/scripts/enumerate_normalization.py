"""Normalize every balanced dividing set with few contractible curves and
report trace lengths against the step bound.

    python3 scripts/enumerate_normalization.py [--max-curves 4] [--pairs 1 2 3]
"""

import argparse
import itertools
import time
from collections import Counter

from contact_surgery.dividing import (
    Node, TorusDividingSet, normalize, relative_euler, replay, strip_sign, transport_distance,
)
from contact_surgery.slope_calc import Slope


def trees(size, sign):
    """Rooted signed trees with `size` nodes, children alternating in sign."""
    if size == 1:
        yield Node(sign)
        return
    for kids in forests(size - 1, -sign):
        yield Node(sign, kids)


def forests(size, sign):
    """Unordered forests (as sorted tuples) with `size` nodes."""
    if size == 0:
        yield ()
        return
    seen = set()
    for first in range(1, size + 1):
        for t in trees(first, sign):
            for rest in forests(size - first, sign):
                f = tuple(sorted((t,) + rest, key=Node.text))
                if f not in seen:
                    seen.add(f)
                    yield f


def dividing_sets(max_curves, pairs):
    n = 2 * pairs
    for sizes in itertools.product(range(max_curves + 1), repeat=n):
        if sum(sizes) > max_curves:
            continue
        choices = [list(forests(k, -strip_sign(i))) for i, k in enumerate(sizes)]
        for forest in itertools.product(*choices):
            yield TorusDividingSet(pairs, Slope(0, 1), forest)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-curves", type=int, default=4)
    ap.add_argument("--pairs", type=int, nargs="+", default=[1, 2])
    args = ap.parse_args()
    t0 = time.perf_counter()
    lengths, ops, worst = Counter(), Counter(), 0.0
    total = 0
    for pairs in args.pairs:
        for ds in dividing_sets(args.max_curves, pairs):
            if relative_euler(ds) != 0:
                continue
            out, trace = normalize(ds)
            assert not any(out.forest) and replay(ds, trace) == out
            bound = 4 * ds.contractible_count() + transport_distance(ds)
            assert len(trace) <= bound, ds.text()
            worst = max(worst, len(trace) / bound if bound else 0.0)
            lengths[len(trace)] += 1
            ops.update(s.op for s in trace)
            total += 1
    dt = time.perf_counter() - t0
    print(f"balanced instances: {total}  ({dt:.2f} s)")
    print("trace length histogram:", dict(sorted(lengths.items())))
    print("macro counts:", dict(sorted(ops.items())))
    print(f"largest trace / bound: {worst:.2f}")


if __name__ == "__main__":
    main()
