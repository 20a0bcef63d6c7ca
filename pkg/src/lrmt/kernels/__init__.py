"""Hot numeric kernels behind a backend switch.

``numba`` is used when it imports and ``LRMT_NUMBA`` is not set to ``0``;
otherwise the pure-numpy implementations run. Both backends return identical
results; ``benchmarks/bench_kernels.py`` compares their speed.

All kernels take token sequences as int64 id arrays (see :func:`encode`).
"""

from __future__ import annotations

import os

import numpy as np

from lrmt.kernels import _numpy as numpy_backend

__all__ = [
    "BACKEND",
    "encode",
    "levenshtein",
    "align",
    "ter_shift_search",
    "kendall_counts",
    "numpy_backend",
    "numba_backend",
]


def _want_numba() -> bool:
    return os.environ.get("LRMT_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


numba_backend = None
if _want_numba():
    try:
        from lrmt.kernels import _numba as numba_backend
    except ImportError:  # numba is an optional extra
        numba_backend = None

_impl = numba_backend if numba_backend is not None else numpy_backend
BACKEND = "numba" if numba_backend is not None else "numpy"


def encode(*seqs: list[str]) -> list[np.ndarray]:
    """Map token lists onto shared int64 ids."""
    vocab: dict[str, int] = {}
    return [np.array([vocab.setdefault(t, len(vocab)) for t in s], dtype=np.int64) for s in seqs]


def levenshtein(a: np.ndarray, b: np.ndarray) -> int:
    return int(_impl.levenshtein(a, b))


def align(a: np.ndarray, b: np.ndarray) -> tuple[int, np.ndarray]:
    dist, matched = _impl.align(a, b)
    return int(dist), matched


def ter_shift_search(hyp: np.ndarray, ref: np.ndarray, max_phrase: int = 10) -> tuple[int, int, np.ndarray]:
    shifts, edits, shifted = _impl.ter_shift_search(hyp, ref, max_phrase)
    return int(shifts), int(edits), shifted


def kendall_counts(ranks: np.ndarray) -> tuple[int, int]:
    conc, disc = _impl.kendall_counts(ranks)
    return int(conc), int(disc)
