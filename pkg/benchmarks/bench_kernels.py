"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--pairs 300] [--length 25] [--repeat 3]

Both backends are imported directly, so ``LRMT_NUMBA`` has no effect here.
Each row reports the best of ``--repeat`` runs over the same random pairs.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from lrmt.kernels import _numpy as np_backend

try:
    from lrmt.kernels import _numba as nb_backend
except ImportError:
    nb_backend = None


def make_pairs(n: int, length: int, vocab: int, seed: int):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        a = rng.integers(0, vocab, rng.integers(length // 2, length + 1), dtype=np.int64)
        b = a.copy()
        # perturb a copy so alignments are non-trivial
        for _ in range(max(1, len(b) // 4)):
            b[rng.integers(len(b))] = rng.integers(vocab)
        b = np.roll(b, rng.integers(-3, 4))
        out.append((a, b))
    return out


def workloads(pairs):
    return {
        "levenshtein": lambda be: [be.levenshtein(a, b) for a, b in pairs],
        "align": lambda be: [be.align(a, b) for a, b in pairs],
        "ter_shift_search": lambda be: [be.ter_shift_search(a, b, 10) for a, b in pairs],
        "kendall_counts": lambda be: [be.kendall_counts(np.argsort(a, kind="stable").astype(np.int64)) for a, _ in pairs],
    }


def _plain(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (tuple, list)):
        return [_plain(v) for v in x]
    return int(x)


def best_of(fn, backend, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(backend)
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=300)
    ap.add_argument("--length", type=int, default=25)
    ap.add_argument("--vocab", type=int, default=12)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    pairs = make_pairs(args.pairs, args.length, args.vocab, args.seed)
    print(f"{args.pairs} pairs, up to {args.length} tokens, vocab {args.vocab}")
    if nb_backend is None:
        print("numba is not installed; timing numpy only")
    print(f"{'kernel':<18} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for name, fn in workloads(pairs).items():
        t_np = best_of(fn, np_backend, args.repeat)
        if nb_backend is None:
            print(f"{name:<18} {t_np:>10.4f}")
            continue
        # the first call also compiles, outside the timed runs
        if _plain(fn(nb_backend)) != _plain(fn(np_backend)):
            raise SystemExit(f"{name}: backends disagree")
        t_nb = best_of(fn, nb_backend, args.repeat)
        print(f"{name:<18} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
