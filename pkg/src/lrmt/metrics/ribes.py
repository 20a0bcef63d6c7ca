"""RIBES: normalised Kendall's tau over a one-to-one word alignment."""

from __future__ import annotations

import math
from collections import Counter

import numpy as np

from lrmt import kernels
from lrmt.metrics._common import SegmentScore, check_corpus
from lrmt.tokenize import word_tokenize


def _bigram_index(tokens: list[str]) -> tuple[Counter, dict]:
    counts: Counter = Counter()
    first: dict = {}
    for k in range(len(tokens) - 1):
        bg = (tokens[k], tokens[k + 1])
        counts[bg] += 1
        first.setdefault(bg, k)
    return counts, first


def word_alignment(hyp: list[str], ref: list[str]) -> list[int]:
    """Reference positions of aligned hypothesis words, in hypothesis order.

    A word aligns directly when it occurs exactly once on each side;
    otherwise through its left, then right, neighbour bigram when that
    bigram is unique on each side. Words whose reference position is already
    taken stay unaligned.
    """
    hc, rc = Counter(hyp), Counter(ref)
    h_bg, _ = _bigram_index(hyp)
    r_bg, r_first = _bigram_index(ref)
    ref_first = {}
    for j, w in enumerate(ref):
        ref_first.setdefault(w, j)
    used: set[int] = set()
    out: list[int] = []
    last = len(hyp) - 1
    for i, w in enumerate(hyp):
        if rc[w] == 0:
            continue
        pos = None
        if hc[w] == 1 and rc[w] == 1:
            pos = ref_first[w]
        else:
            if i > 0:
                bg = (hyp[i - 1], w)
                if h_bg[bg] == 1 and r_bg[bg] == 1:
                    pos = r_first[bg] + 1
            if pos is None and i < last:
                bg = (w, hyp[i + 1])
                if h_bg[bg] == 1 and r_bg[bg] == 1:
                    pos = r_first[bg]
        if pos is not None and pos not in used:
            used.add(pos)
            out.append(pos)
    return out


def ribes_tokens(hyp: list[str], ref: list[str], alpha: float = 0.25, beta: float = 0.10) -> SegmentScore:
    if not hyp or not ref:
        return SegmentScore(0.0, {"aligned": 0, "nkt": 0.0, "precision": 0.0, "bp": 0.0})
    aligned = word_alignment(hyp, ref)
    n = len(aligned)
    bp = min(1.0, math.exp(1.0 - len(ref) / len(hyp)))
    precision = n / len(hyp)
    if n < 2:
        return SegmentScore(0.0, {"aligned": n, "nkt": 0.0, "precision": precision, "bp": bp})
    conc, disc = kernels.kendall_counts(np.asarray(aligned, dtype=np.int64))
    tau = (conc - disc) / (n * (n - 1) / 2)
    nkt = (tau + 1.0) / 2.0
    value = nkt * precision**alpha * bp**beta
    return SegmentScore(value, {"aligned": n, "nkt": nkt, "precision": precision, "bp": bp})


def ribes(hypothesis: str, reference: str, alpha: float = 0.25, beta: float = 0.10, lowercase: bool = False) -> SegmentScore:
    return ribes_tokens(word_tokenize(hypothesis, lowercase), word_tokenize(reference, lowercase), alpha, beta)


def ribes_corpus(hypotheses: list[str], references: list[str], alpha: float = 0.25, beta: float = 0.10, lowercase: bool = False) -> SegmentScore:
    """Arithmetic mean of segment scores."""
    check_corpus(hypotheses, references)
    scores = [ribes(h, r, alpha, beta, lowercase).value for h, r in zip(hypotheses, references)]
    return SegmentScore(sum(scores) / len(scores), {"segments": len(scores)})
