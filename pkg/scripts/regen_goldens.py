"""Rewrite the golden ASCII frames in tests/golden/.

Run only after checking the new frames by eye; the tests compare against
whatever this writes.
"""

from pathlib import Path

from contact_surgery.dividing import normalize, parse_ds, transport
from contact_surgery.shell.render import render_ascii, trace_frames

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"

# a + curve carried to the other negative strip: create a pair, cancel the old one
MOVE = "DS(pairs=2, slope=0/1, forest=[1:{+}])"
# an independent pair in two strips that are not adjacent across a single curve
PAIR = "DS(pairs=2, slope=0/1, forest=[1:{+}, 2:{-}])"


def sequences():
    ds = parse_ds(MOVE)
    _, step = transport(ds, (1, 0))
    yield "move", trace_frames(ds, [step])
    ds = parse_ds(PAIR)
    _, trace = normalize(ds)
    yield "pair", trace_frames(ds, trace)


def main():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for name, frames in sequences():
        for i, ds in enumerate(frames):
            path = GOLDEN / f"{name}_{i}.txt"
            path.write_text(render_ascii(ds), encoding="utf-8")
            print(path)


if __name__ == "__main__":
    main()
