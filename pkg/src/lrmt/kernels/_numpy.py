"""Pure-numpy kernels, same contracts and results as the compiled ones.

The edit-distance row update has a left-to-right dependency (insertions);
it is vectorised with the usual trick: after taking the best of deletion and
substitution per cell, ``row[j] = min_k<=j (tmp[k] + j - k)``, i.e. a running
minimum of ``tmp - j`` shifted back by ``j``.
"""

from __future__ import annotations

import numpy as np


def _next_row(prev: np.ndarray, ai, b: np.ndarray, i: int, offsets: np.ndarray) -> np.ndarray:
    tmp = np.empty_like(prev)
    tmp[0] = i
    np.minimum(prev[1:] + 1, prev[:-1] + (b != ai), out=tmp[1:])
    return np.minimum.accumulate(tmp - offsets) + offsets


def levenshtein(a: np.ndarray, b: np.ndarray) -> int:
    m = b.shape[0]
    offsets = np.arange(m + 1)
    row = offsets.copy()
    for i in range(1, a.shape[0] + 1):
        row = _next_row(row, a[i - 1], b, i, offsets)
    return int(row[m])


def align(a: np.ndarray, b: np.ndarray) -> tuple[int, np.ndarray]:
    n, m = a.shape[0], b.shape[0]
    offsets = np.arange(m + 1)
    d = np.empty((n + 1, m + 1), dtype=np.int64)
    d[0] = offsets
    for i in range(1, n + 1):
        d[i] = _next_row(d[i - 1], a[i - 1], b, i, offsets)
    matched = np.full(n, -1, dtype=np.int64)
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and a[i - 1] == b[j - 1] and d[i, j] == d[i - 1, j - 1]:
            matched[i - 1] = j - 1
            i -= 1
            j -= 1
        elif i > 0 and j > 0 and d[i, j] == d[i - 1, j - 1] + 1:
            i -= 1
            j -= 1
        elif i > 0 and d[i, j] == d[i - 1, j] + 1:
            i -= 1
        else:
            j -= 1
    return int(d[n, m]), matched


def _occurrences(ref: np.ndarray, span: np.ndarray) -> np.ndarray:
    k = span.shape[0]
    if k > ref.shape[0]:
        return np.empty(0, dtype=np.int64)
    windows = np.lib.stride_tricks.sliding_window_view(ref, k)
    return np.flatnonzero((windows == span).all(axis=1))


def _span_eligible(hyp, ref, matched, i, k) -> int:
    hits = _occurrences(ref, hyp[i : i + k])
    if hits.size == 0:
        return -1
    j0 = matched[i]
    aligned = j0 >= 0 and np.array_equal(matched[i : i + k], np.arange(j0, j0 + k))
    if aligned and hits.size == 1:
        return 0
    return 1


def _shifted(hyp: np.ndarray, i: int, k: int, dest: int) -> np.ndarray:
    span = hyp[i : i + k]
    rest = np.concatenate((hyp[:i], hyp[i + k :]))
    return np.concatenate((rest[:dest], span, rest[dest:]))


def _shift_index(n: int, i: np.ndarray, k: np.ndarray, dest: np.ndarray) -> np.ndarray:
    """Gather indices of every candidate shift, one row per (i, k, dest)."""
    p = np.arange(n)[None, :]
    i, k, dest = i[:, None], k[:, None], dest[:, None]
    q = np.where(p < dest, p, p - k)  # position within the remainder
    from_rest = np.where(q < i, q, q + k)
    return np.where((p >= dest) & (p < dest + k), i + p - dest, from_rest)


def _batch_levenshtein(hyps: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Edit distance of each row of ``hyps`` to ``b``."""
    c, n = hyps.shape
    m = b.shape[0]
    offsets = np.arange(m + 1)
    row = np.broadcast_to(offsets, (c, m + 1)).copy()
    tmp = np.empty_like(row)
    for t in range(n):
        tmp[:, 0] = t + 1
        np.minimum(row[:, 1:] + 1, row[:, :-1] + (b[None, :] != hyps[:, t : t + 1]), out=tmp[:, 1:])
        row = np.minimum.accumulate(tmp - offsets, axis=1) + offsets
    return row[:, m]


_BATCH = 4096


def ter_shift_search(hyp: np.ndarray, ref: np.ndarray, max_phrase: int):
    cur = hyp.copy()
    n = cur.shape[0]
    shifts = 0
    while True:
        dist, matched = align(cur, ref)
        if dist == 0:
            break
        # candidates in the compiled kernel's scan order: i, then k, then dest
        cand = []
        for i in range(n):
            for k in range(1, min(max_phrase, n - i) + 1):
                state = _span_eligible(cur, ref, matched, i, k)
                if state < 0:
                    break
                if state == 0:
                    continue
                dests = np.arange(n - k + 1)
                dests = dests[dests != i]
                if dests.size:
                    cand.append(np.stack([np.full(dests.size, i), np.full(dests.size, k), dests], axis=1))
        if not cand:
            break
        cand = np.concatenate(cand)
        red = np.empty(len(cand), dtype=np.int64)
        for s in range(0, len(cand), _BATCH):
            c = cand[s : s + _BATCH]
            red[s : s + _BATCH] = dist - _batch_levenshtein(cur[_shift_index(n, c[:, 0], c[:, 1], c[:, 2])], ref)
        top = red.max()
        if top <= 0:
            break
        # sequential rule: first maximum wins, except a longer span from the
        # same origin that ties replaces it (first destination for that span)
        best_i = cand[np.argmax(red == top), 0]
        same = (red == top) & (cand[:, 0] == best_i)
        best_k = cand[same, 1].max()
        best_d = cand[same & (cand[:, 1] == best_k), 2][0]
        cur = _shifted(cur, int(best_i), int(best_k), int(best_d))
        shifts += 1
    return shifts, levenshtein(cur, ref), cur


def kendall_counts(ranks: np.ndarray) -> tuple[int, int]:
    diff = np.sign(ranks[None, :] - ranks[:, None])
    upper = np.triu(diff, k=1)
    return int((upper > 0).sum()), int((upper < 0).sum())
