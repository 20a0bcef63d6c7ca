"""Compiled kernels. Token sequences arrive as int64 id arrays."""

import numpy as np
from numba import njit


@njit(cache=True)
def levenshtein(a, b):
    n = a.shape[0]
    m = b.shape[0]
    prev = np.arange(m + 1)
    cur = np.empty(m + 1, dtype=np.int64)
    for i in range(1, n + 1):
        cur[0] = i
        ai = a[i - 1]
        for j in range(1, m + 1):
            best = prev[j - 1] + (0 if ai == b[j - 1] else 1)
            if prev[j] + 1 < best:
                best = prev[j] + 1
            if cur[j - 1] + 1 < best:
                best = cur[j - 1] + 1
            cur[j] = best
        prev, cur = cur, prev
    return prev[m]


@njit(cache=True)
def align(a, b):
    """Edit distance plus, per position of ``a``, the matched position in ``b`` (or -1)."""
    n = a.shape[0]
    m = b.shape[0]
    d = np.empty((n + 1, m + 1), dtype=np.int64)
    for j in range(m + 1):
        d[0, j] = j
    for i in range(1, n + 1):
        d[i, 0] = i
        for j in range(1, m + 1):
            best = d[i - 1, j - 1] + (0 if a[i - 1] == b[j - 1] else 1)
            if d[i - 1, j] + 1 < best:
                best = d[i - 1, j] + 1
            if d[i, j - 1] + 1 < best:
                best = d[i, j - 1] + 1
            d[i, j] = best
    matched = np.full(n, -1, dtype=np.int64)
    i = n
    j = m
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
    return d[n, m], matched


@njit(cache=True)
def _span_eligible(hyp, ref, matched, i, k):
    """-1: span occurs nowhere in ref; 0: only where it is already aligned; 1: shiftable."""
    m = ref.shape[0]
    j0 = matched[i]
    aligned = j0 >= 0
    if aligned:
        for t in range(1, k):
            if matched[i + t] != j0 + t:
                aligned = False
                break
    found = False
    for j in range(m - k + 1):
        ok = True
        for t in range(k):
            if hyp[i + t] != ref[j + t]:
                ok = False
                break
        if ok:
            found = True
            if not (aligned and j == j0):
                return 1
    return 0 if found else -1


@njit(cache=True)
def _shifted(hyp, i, k, dest, out):
    # remove hyp[i:i+k], reinsert it so that it starts at ``dest`` of the remainder
    n = hyp.shape[0]
    pos = 0
    r = 0
    for p in range(n - k + 1):
        if p == dest:
            for t in range(k):
                out[pos] = hyp[i + t]
                pos += 1
        if p == n - k:
            break
        if r == i:
            r += k
        out[pos] = hyp[r]
        pos += 1
        r += 1


@njit(cache=True)
def ter_shift_search(hyp, ref, max_phrase):
    """Greedy phrase-shift search; returns (shifts, residual edits, shifted hyp)."""
    cur = hyp.copy()
    n = cur.shape[0]
    buf = np.empty(n, dtype=np.int64)
    shifts = 0
    while True:
        dist, matched = align(cur, ref)
        if dist == 0:
            break
        best_r = 0
        best_i = -1
        best_k = 0
        best_d = 0
        for i in range(n):
            for k in range(1, min(max_phrase, n - i) + 1):
                state = _span_eligible(cur, ref, matched, i, k)
                if state < 0:
                    break
                if state == 0:
                    continue
                for dest in range(n - k + 1):
                    if dest == i:
                        continue
                    _shifted(cur, i, k, dest, buf)
                    r = dist - levenshtein(buf, ref)
                    if r > best_r or (r == best_r and r > 0 and i == best_i and k > best_k):
                        best_r = r
                        best_i = i
                        best_k = k
                        best_d = dest
        if best_r <= 0:
            break
        _shifted(cur, best_i, best_k, best_d, buf)
        cur[:] = buf
        shifts += 1
    return shifts, levenshtein(cur, ref), cur


@njit(cache=True)
def kendall_counts(ranks):
    n = ranks.shape[0]
    conc = 0
    disc = 0
    for i in range(n - 1):
        for j in range(i + 1, n):
            if ranks[i] < ranks[j]:
                conc += 1
            elif ranks[i] > ranks[j]:
                disc += 1
    return conc, disc
