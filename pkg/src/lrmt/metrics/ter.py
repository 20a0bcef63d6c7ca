"""Translation Edit Rate with greedy phrase shifts.

Shift rules: a shifted phrase is at most ``max_phrase`` tokens, must equal a
reference span it is not already aligned to, and may be re-inserted at any
position. Each round applies the single shift with the largest drop in edit
distance (ties: leftmost origin, then longest phrase, then leftmost
destination) and stops once no shift lowers the distance.
"""

from __future__ import annotations

from lrmt import kernels
from lrmt.errors import EmptyReference
from lrmt.metrics._common import SegmentScore, check_corpus
from lrmt.tokenize import word_tokenize


def ter_counts(hyp: list[str], ref: list[str], max_phrase: int = 10) -> tuple[int, int]:
    """(shifts, residual edits) for token lists."""
    h, r = kernels.encode(hyp, ref)
    shifts, edits, _ = kernels.ter_shift_search(h, r, max_phrase)
    return shifts, edits


def _segment(hypothesis: str, reference: str, lowercase: bool, max_phrase: int) -> tuple[int, int, int]:
    ref = word_tokenize(reference, lowercase)
    if not ref:
        raise EmptyReference("reference has no tokens")
    shifts, edits = ter_counts(word_tokenize(hypothesis, lowercase), ref, max_phrase)
    return shifts, edits, len(ref)


def ter(hypothesis: str, reference: str, lowercase: bool = False, max_phrase: int = 10) -> SegmentScore:
    shifts, edits, ref_len = _segment(hypothesis, reference, lowercase, max_phrase)
    return SegmentScore(
        100.0 * (shifts + edits) / ref_len,
        {"shifts": shifts, "edits": edits, "ref_len": ref_len},
    )


def ter_corpus(hypotheses: list[str], references: list[str], lowercase: bool = False, max_phrase: int = 10) -> SegmentScore:
    check_corpus(hypotheses, references)
    shifts = edits = ref_len = 0
    for h, r in zip(hypotheses, references):
        s, e, n = _segment(h, r, lowercase, max_phrase)
        shifts += s
        edits += e
        ref_len += n
    return SegmentScore(
        100.0 * (shifts + edits) / ref_len,
        {"shifts": shifts, "edits": edits, "ref_len": ref_len},
    )
