"""Throughput of clean_line on mixed-script text.

    python3 benchmarks/bench_normalize.py [--lines 200000] [--jobs 1]

The sample mixes plain English, Bengali-script and Latin-script sentences
with a share of dirty lines (typographic quotes, NBSP, zero-width and
fullwidth characters), roughly what crawled parallel data looks like.
"""

from __future__ import annotations

import argparse
import random
import time

from lrmt.normalize import clean_lines

ENGLISH = "the government said on monday that new roads will be built in hill districts before rains".split()
LATIN = "ka u ki ba la ia ha jong kiba sngi shnong hapoh nga leh an chu kan tih a mi".split()
BENGALI = "অসম চৰকাৰে সোমবাৰে কয় যে পাহাৰীয়া জিলাত নতুন পথ নিৰ্মাণ কৰা হ'ব বৰষুণৰ আগতে".split()
NOISE = ["“", "”", " ", "​", "！", "’", "  ", "«", "…", "\t"]


def sample_lines(n: int, seed: int = 0, dirty_share: float = 0.15) -> list[str]:
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        pool = rng.choices((ENGLISH, BENGALI, LATIN), weights=(5, 3, 2))[0]
        words = rng.choices(pool, k=rng.randint(5, 20))
        if rng.random() < dirty_share:
            for _ in range(rng.randint(1, 3)):
                words.insert(rng.randrange(len(words) + 1), rng.choice(NOISE))
        out.append(" ".join(words) + ("।" if pool is BENGALI else "."))
    return out


def measure(lines: list[str], jobs: int = 1) -> float:
    """Lines per second for one pass over ``lines``."""
    t0 = time.perf_counter()
    for _ in clean_lines(lines, jobs=jobs):
        pass
    return len(lines) / (time.perf_counter() - t0)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lines", type=int, default=200_000)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--dirty-share", type=float, default=0.15)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    lines = sample_lines(args.lines, dirty_share=args.dirty_share)
    measure(lines[:1000])  # build the category tables first
    rates = [measure(lines, args.jobs) for _ in range(args.repeat)]
    print(f"{args.lines} lines, {args.dirty_share:.0%} dirty, jobs={args.jobs}")
    print(f"best {max(rates):,.0f} lines/s, worst {min(rates):,.0f} lines/s")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
