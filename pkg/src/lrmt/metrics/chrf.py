"""Corpus chrF: character n-gram F-score with statistics pooled over segments."""

from __future__ import annotations

from lrmt.metrics._common import SegmentScore, check_corpus
from lrmt.tokenize import char_ngrams, simple_casefold


def chrf_counts(hyp: str, ref: str, max_order: int = 6) -> list[tuple[int, int, int]]:
    """Per order: (clipped matches, hypothesis n-grams, reference n-grams)."""
    out = []
    for n in range(1, max_order + 1):
        h = char_ngrams(hyp, n)
        r = char_ngrams(ref, n)
        out.append((sum((h & r).values()), sum(h.values()), sum(r.values())))
    return out


def chrf_from_counts(counts: list[tuple[int, int, int]], beta: float = 2.0) -> tuple[float, float, float]:
    """(chrF on 0-100, mean precision, mean recall); orders empty on both sides are skipped."""
    ps, rs = [], []
    for match, th, tr in counts:
        if th == 0 and tr == 0:
            continue
        ps.append(match / th if th else 0.0)
        rs.append(match / tr if tr else 0.0)
    if not ps:
        return 0.0, 0.0, 0.0
    p = sum(ps) / len(ps)
    r = sum(rs) / len(rs)
    b2 = beta * beta
    den = b2 * p + r
    if den == 0:
        return 0.0, p, r
    return 100.0 * (1 + b2) * p * r / den, p, r


def chrf_corpus(
    hypotheses: list[str],
    references: list[str],
    max_order: int = 6,
    beta: float = 2.0,
    lowercase: bool = False,
) -> SegmentScore:
    check_corpus(hypotheses, references)
    pooled = [[0, 0, 0] for _ in range(max_order)]
    for h, r in zip(hypotheses, references):
        if lowercase:
            h, r = simple_casefold(h), simple_casefold(r)
        for acc, c in zip(pooled, chrf_counts(h, r, max_order)):
            acc[0] += c[0]
            acc[1] += c[1]
            acc[2] += c[2]
    counts = [tuple(c) for c in pooled]
    value, p, r = chrf_from_counts(counts, beta)
    return SegmentScore(value, {"counts": [list(c) for c in counts], "precision": p, "recall": r})
