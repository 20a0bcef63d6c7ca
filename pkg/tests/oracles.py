"""Slow, independent reference implementations used to freeze expected values.

Nothing here imports from ``lrmt``; each function is written for clarity
against the rule text, not for speed.
"""

from __future__ import annotations

import itertools
import math
import unicodedata
from collections import Counter, deque

# ---------------------------------------------------------------- cleaning

_PUNCT_RULES_SINGLE = [
    ("„“”", '"'),
    ("‚‘’‹›", "'"),
    ("–—―", "-"),
    ("…", "..."),
    (" ", " "),
]


def punct_oracle(s: str) -> str:
    s = "".join(c for c in s if c not in "​﻿­")
    # guillemets: open eats following spaces, close eats preceding spaces
    out = []
    i = 0
    while i < len(s):
        c = s[i]
        if c == "«":
            out.append('"')
            i += 1
            while i < len(s) and s[i] == " ":
                i += 1
            continue
        if c == "»":
            while out and out[-1] == " ":
                out.pop()
            out.append('"')
            i += 1
            continue
        out.append(c)
        i += 1
    s = "".join(out)
    for chars, repl in _PUNCT_RULES_SINGLE:
        s = "".join(repl if c in chars else c for c in s)
    out = []
    for c in s:
        if c in ",.!?;:%)":
            while out and out[-1] == " ":
                out.pop()
        out.append(c)
    s = "".join(out)
    while "  " in s:
        s = s.replace("  ", " ")
    return s.strip(" ")


def nonprintable_oracle(s: str) -> str:
    return "".join(
        " " if unicodedata.category(c) in ("Cc", "Cf", "Cs", "Co", "Cn") else c for c in s
    )


def clean_oracle(s: str) -> str:
    while True:
        t = unicodedata.normalize("NFKC", nonprintable_oracle(punct_oracle(s)))
        t = " ".join(t.split())
        if t == s:
            return t
        s = t


# ---------------------------------------------------------------- TER


def levenshtein_oracle(a, b) -> int:
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        for j, y in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def _all_shifts(seq: tuple, max_len: int = 10):
    n = len(seq)
    for i in range(n):
        for k in range(1, min(max_len, n - i) + 1):
            span = seq[i : i + k]
            rest = seq[:i] + seq[i + k :]
            for d in range(len(rest) + 1):
                if d == i:
                    continue
                yield rest[:d] + span + rest[d:]


def ter_exhaustive_numerator(hyp: list[str], ref: list[str]) -> int:
    """min over all shift sequences of (#shifts + Levenshtein after shifting)."""
    start = tuple(hyp)
    best = levenshtein_oracle(start, ref)
    seen = {start: 0}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        depth = seen[cur]
        if depth + 1 >= best:
            continue
        for nxt in _all_shifts(cur):
            if nxt in seen:
                continue
            seen[nxt] = depth + 1
            best = min(best, depth + 1 + levenshtein_oracle(nxt, ref))
            queue.append(nxt)
    return best


# ---------------------------------------------------------------- METEOR


def count_chunks(alignment: list[tuple[int, int]]) -> int:
    alignment = sorted(alignment)
    chunks = 0
    prev = None
    for h, r in alignment:
        if prev is None or h != prev[0] + 1 or r != prev[1] + 1:
            chunks += 1
        prev = (h, r)
    return chunks


def meteor_exhaustive(hyp: list[str], ref: list[str]) -> tuple[int, int]:
    """(m, min chunks) by enumerating every maximum exact matching."""
    words = sorted(set(hyp) & set(ref))
    per_word = []
    for w in words:
        hp = [i for i, x in enumerate(hyp) if x == w]
        rp = [j for j, x in enumerate(ref) if x == w]
        k = min(len(hp), len(rp))
        options = []
        for hs in itertools.combinations(hp, k):
            for rs in itertools.permutations(rp, k):
                options.append(list(zip(hs, rs)))
        per_word.append(options)
    m = sum(len(opts[0]) for opts in per_word) if per_word else 0
    if m == 0:
        return 0, 0
    best = min(count_chunks([p for part in combo for p in part]) for combo in itertools.product(*per_word))
    return m, best


def meteor_formula(m: int, hyp_len: int, ref_len: int, chunks: int) -> float:
    if m == 0:
        return 0.0
    p = m / hyp_len
    r = m / ref_len
    f = 10 * p * r / (r + 9 * p)
    return f * (1 - 0.5 * (chunks / m) ** 3)


# ---------------------------------------------------------------- BLEU / chrF


def ngrams(seq, n):
    return Counter(tuple(seq[i : i + n]) for i in range(len(seq) - n + 1))


def bleu_oracle(hyps: list[list[str]], refs: list[list[str]], max_order: int = 4) -> float:
    match = [0] * max_order
    total = [0] * max_order
    for h, r in zip(hyps, refs):
        for n in range(1, max_order + 1):
            hc, rc = ngrams(h, n), ngrams(r, n)
            match[n - 1] += sum(min(c, rc[g]) for g, c in hc.items())
            total[n - 1] += sum(hc.values())
    c = sum(len(h) for h in hyps)
    r = sum(len(x) for x in refs)
    orders = [n for n in range(max_order) if total[n] > 0]
    if c == 0 or any(match[n] == 0 for n in orders):
        return 0.0
    logp = sum(math.log(match[n] / total[n]) for n in orders) / len(orders)
    bp = 1.0 if c > r else math.exp(1 - r / c)
    return 100 * bp * math.exp(logp)


def chrf_oracle(hyps: list[str], refs: list[str], max_order: int = 6, beta: float = 2.0) -> float:
    match = [0] * max_order
    th = [0] * max_order
    tr = [0] * max_order
    for h, r in zip(hyps, refs):
        h = "".join(h.split())
        r = "".join(r.split())
        for n in range(1, max_order + 1):
            hc = Counter(h[i : i + n] for i in range(len(h) - n + 1))
            rc = Counter(r[i : i + n] for i in range(len(r) - n + 1))
            match[n - 1] += sum(min(c, rc[g]) for g, c in hc.items())
            th[n - 1] += sum(hc.values())
            tr[n - 1] += sum(rc.values())
    ps, rs = [], []
    for n in range(max_order):
        if th[n] == 0 and tr[n] == 0:
            continue
        ps.append(match[n] / th[n] if th[n] else 0.0)
        rs.append(match[n] / tr[n] if tr[n] else 0.0)
    if not ps:
        return 0.0
    p = sum(ps) / len(ps)
    r = sum(rs) / len(rs)
    b2 = beta * beta
    den = b2 * p + r
    return 0.0 if den == 0 else 100 * (1 + b2) * p * r / den


# ---------------------------------------------------------------- RIBES


def ribes_oracle(hyp: list[str], ref: list[str], alpha: float = 0.25, beta: float = 0.10) -> float:
    if not hyp or not ref:
        return 0.0
    used = set()
    aligned = []
    for i, w in enumerate(hyp):
        pos = None
        if hyp.count(w) == 1 and ref.count(w) == 1:
            pos = ref.index(w)
        else:
            for left in (True, False):
                if left and i == 0:
                    continue
                if not left and i == len(hyp) - 1:
                    continue
                bg = (hyp[i - 1], w) if left else (w, hyp[i + 1])
                hyp_hits = [k for k in range(len(hyp) - 1) if (hyp[k], hyp[k + 1]) == bg]
                ref_hits = [k for k in range(len(ref) - 1) if (ref[k], ref[k + 1]) == bg]
                if len(hyp_hits) == 1 and len(ref_hits) == 1:
                    pos = ref_hits[0] + (1 if left else 0)
                    break
        if pos is not None and pos not in used:
            used.add(pos)
            aligned.append(pos)
    n = len(aligned)
    if n < 2:
        return 0.0
    conc = sum(1 for a, b in itertools.combinations(aligned, 2) if a < b)
    disc = sum(1 for a, b in itertools.combinations(aligned, 2) if a > b)
    tau = (conc - disc) / (n * (n - 1) / 2)
    nkt = (tau + 1) / 2
    p = n / len(hyp)
    bp = min(1.0, math.exp(1 - len(ref) / len(hyp)))
    return nkt * p**alpha * bp**beta
