"""Randomized surgery scripts on the standard sphere, used by the
reversibility experiment and its tests."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .dividing import parse_forest
from .errors import CalculusError
from .lutz import lutz_torus, simple_lutz_knot
from .slope_calc import QUARTER_PI, Slope, TwistAngle
from .surgery import (
    ConvexTorusRef,
    TransverseKnotRef,
    approximate_transverse,
    declare_torus,
    reverse,
    round_surgery_1,
    round_surgery_2,
    standard_sphere,
    state_json,
)

ANGLES = (TwistAngle(0, Slope(-1, 100)), QUARTER_PI, TwistAngle(0, Slope(-1, 3)))
MERIDIANS = ((0, 1), (1, 0), (1, 1), (1, -2), (2, 1))
FORESTS = ("", "0:{-}, 1:{+}", "0:{-(+ -)}, 1:{+}", "1:{+(-)}")


@dataclass
class RandomScriptConfig:
    surgeries: int = 10
    max_steps: int = 150
    seed: int = 0


def random_presentation(cfg: RandomScriptConfig):
    """Apply random declarations, surgeries and Lutz twists until cfg.surgeries
    round surgeries have happened (or max_steps is reached)."""
    rng = random.Random(cfg.seed)
    p = standard_sphere()
    names = iter(f"X{i}" for i in range(10_000))
    for _ in range(cfg.max_steps):
        if len(p.surgery_events()) >= cfg.surgeries:
            break
        knots = sorted(n for n, r in p.tracked.items() if isinstance(r, TransverseKnotRef))
        tori = sorted(n for n, r in p.tracked.items() if isinstance(r, ConvexTorusRef))
        move = rng.choice(("knot", "knot", "torus", "rsurg1", "rsurg2", "rsurg2", "lutz", "lutz_torus"))
        try:
            if move == "knot" or not knots:
                p, _ = approximate_transverse(p, next(names), rng.choice(ANGLES))
            elif move == "torus":
                free = [k for k in knots if not any(
                    isinstance(r, ConvexTorusRef) and r.inner == (p.tracked[k].piece, "out")
                    for r in p.tracked.values())]
                if free:
                    forest = parse_forest(rng.choice(FORESTS), 1)
                    p, _ = declare_torus(p, next(names), at=rng.choice(free),
                                         meridian=rng.choice(MERIDIANS), forest=forest)
            elif move == "rsurg1" and len(knots) >= 2:
                k1, k2 = rng.sample(knots, 2)
                p = round_surgery_1(p, k1, k2)
            elif move == "rsurg2" and tori:
                p = round_surgery_2(p, rng.choice(tori))
            elif move == "lutz":
                p = simple_lutz_knot(p, rng.choice(knots))
            elif move == "lutz_torus" and tori:
                p = lutz_torus(p, rng.choice(tori), rng.choice((1, 2)))
        except CalculusError:
            # a random move that does not apply (mismatched slopes, contractible curves, ...)
            pass
    return p


def reverse_all(p):
    """Reverse every original event, most recent first."""
    for no in range(len(p.events), 0, -1):
        p = reverse(p, no)
    return p


def reversal_round_trip(cfg: RandomScriptConfig) -> bool:
    p = random_presentation(cfg)
    return state_json(reverse_all(p)) == state_json(standard_sphere())
