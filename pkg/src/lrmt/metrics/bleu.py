"""Corpus BLEU with clipped n-gram precisions and a brevity penalty.

Orders for which the hypothesis side has no n-grams at all are left out of
the geometric mean (so a three-token corpus is scored on orders 1..3).
"""

from __future__ import annotations

import math

from lrmt.errors import InvalidConfig
from lrmt.metrics._common import SegmentScore, check_corpus
from lrmt.tokenize import word_ngrams, word_tokenize

SMOOTHING = ("none", "floor")


def clipped_counts(hyp: list[str], ref: list[str], max_order: int = 4) -> tuple[list[int], list[int]]:
    """Per-order clipped matches and hypothesis n-gram totals for one segment."""
    matches, totals = [], []
    for n in range(1, max_order + 1):
        h = word_ngrams(hyp, n)
        r = word_ngrams(ref, n)
        matches.append(sum((h & r).values()))
        totals.append(max(0, len(hyp) - n + 1))
    return matches, totals


def _score(matches, totals, hyp_len, ref_len, smoothing, epsilon) -> tuple[float, list[float], float]:
    if smoothing not in SMOOTHING:
        raise InvalidConfig(f"unknown smoothing {smoothing!r}")
    precisions = []
    log_sum = 0.0
    orders = 0
    zero = False
    for match, total in zip(matches, totals):
        if total == 0:
            precisions.append(0.0)
            continue
        orders += 1
        if match == 0:
            if smoothing == "none":
                zero = True
                precisions.append(0.0)
                continue
            p = epsilon / total
        else:
            p = match / total
        precisions.append(p)
        log_sum += math.log(p)
    if hyp_len == 0:
        return 0.0, precisions, 0.0
    bp = 1.0 if hyp_len > ref_len else math.exp(1.0 - ref_len / hyp_len)
    if zero or orders == 0:
        return 0.0, precisions, bp
    return 100.0 * bp * math.exp(log_sum / orders), precisions, bp


def bleu_corpus(
    hypotheses: list[str],
    references: list[str],
    max_order: int = 4,
    smoothing: str = "none",
    epsilon: float = 0.1,
    lowercase: bool = False,
) -> SegmentScore:
    check_corpus(hypotheses, references)
    matches = [0] * max_order
    totals = [0] * max_order
    hyp_len = ref_len = 0
    for h, r in zip(hypotheses, references):
        ht = word_tokenize(h, lowercase)
        rt = word_tokenize(r, lowercase)
        m, t = clipped_counts(ht, rt, max_order)
        for n in range(max_order):
            matches[n] += m[n]
            totals[n] += t[n]
        hyp_len += len(ht)
        ref_len += len(rt)
    value, precisions, bp = _score(matches, totals, hyp_len, ref_len, smoothing, epsilon)
    return SegmentScore(
        value,
        {
            "matches": matches,
            "totals": totals,
            "precisions": precisions,
            "bp": bp,
            "hyp_len": hyp_len,
            "ref_len": ref_len,
        },
    )


def bleu_sentence(hypothesis: str, reference: str, max_order: int = 4, epsilon: float = 0.1, lowercase: bool = False) -> SegmentScore:
    """Segment-level BLEU for diagnostics; floor-smoothed so it never hits log 0."""
    return bleu_corpus([hypothesis], [reference], max_order, "floor", epsilon, lowercase)
