"""METEOR, exact-match stage only.

The matching is a maximum one-to-one exact unigram matching; among all such
matchings the one with the fewest chunks is used.

``chunks = matches - links``, where a link is a pair of consecutive
hypothesis words matched to consecutive reference words, so the search
maximises links. Only "link-capable" pairs (equal words whose left or right
neighbours are also equal) can take part in a link, and any injective set of
link-capable pairs extends to a maximum matching without losing links. The
search is therefore a forward DP over hypothesis positions whose state is
(reference position of the previous capable match, capable reference
positions already taken). Both parts are trimmed to what can still affect
later positions. Inputs that still blow up are capped at ``max_states``
states per position, keeping the best, and flagged ``exact=False``.
"""

from __future__ import annotations

from collections import Counter

from lrmt.metrics._common import SegmentScore, check_corpus
from lrmt.tokenize import word_tokenize

DEFAULT_MAX_STATES = 50_000


def max_matches(hyp: list[str], ref: list[str]) -> int:
    return sum((Counter(hyp) & Counter(ref)).values())


def _capable_pairs(hyp: list[str], ref: list[str]) -> list[list[int]]:
    ref_pos: dict[str, list[int]] = {}
    for j, w in enumerate(ref):
        ref_pos.setdefault(w, []).append(j)
    n, m = len(hyp), len(ref)
    out = []
    for i, w in enumerate(hyp):
        out.append([
            j
            for j in ref_pos.get(w, ())
            if (i + 1 < n and j + 1 < m and hyp[i + 1] == ref[j + 1])
            or (i > 0 and j > 0 and hyp[i - 1] == ref[j - 1])
        ])
    return out


def max_links(hyp: list[str], ref: list[str], max_states: int = DEFAULT_MAX_STATES) -> tuple[int, bool]:
    """Most links any one-to-one exact matching can have; second item is False if capped."""
    capable = _capable_pairs(hyp, ref)
    n = len(hyp)
    relevant = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        bits = 0
        for j in capable[i]:
            bits |= 1 << j
        relevant[i] = relevant[i + 1] | bits

    exact = True
    states: dict[tuple[int, int], int] = {(-1, 0): 0}
    for i in range(n):
        nxt: dict[tuple[int, int], int] = {}
        keep = relevant[i + 1]
        follow = capable[i + 1] if i + 1 < n else ()
        for (prev, mask), links in states.items():
            # leave position i out of the capable set
            key = (-1, mask & keep)
            if nxt.get(key, -1) < links:
                nxt[key] = links
            for j in capable[i]:
                if mask >> j & 1:
                    continue
                new_mask = mask | (1 << j)
                gained = links + (1 if j == prev + 1 and prev >= 0 else 0)
                nprev = j if (j + 1) in follow and not new_mask >> (j + 1) & 1 else -1
                key = (nprev, new_mask & keep)
                if nxt.get(key, -1) < gained:
                    nxt[key] = gained
        if len(nxt) > max_states:
            exact = False
            nxt = dict(sorted(nxt.items(), key=lambda kv: (-kv[1], kv[0]))[:max_states])
        states = nxt
    return max(states.values()), exact


def min_chunk_alignment(hyp: list[str], ref: list[str], max_states: int = DEFAULT_MAX_STATES) -> tuple[int, int, bool]:
    """Return ``(matches, chunks, exact)`` for the min-chunk maximum matching."""
    matches = max_matches(hyp, ref)
    if matches == 0:
        return 0, 0, True
    links, exact = max_links(hyp, ref, max_states)
    return matches, matches - links, exact


def meteor_score(matches: int, hyp_len: int, ref_len: int, chunks: int) -> float:
    if matches == 0:
        return 0.0
    p = matches / hyp_len
    r = matches / ref_len
    f = 10.0 * p * r / (r + 9.0 * p)
    penalty = 0.5 * (chunks / matches) ** 3
    return f * (1.0 - penalty)


def meteor_corpus(hypotheses: list[str], references: list[str], lowercase: bool = False) -> SegmentScore:
    """Pooled METEOR: matches, lengths and chunks are summed before scoring."""
    check_corpus(hypotheses, references)
    m = hyp_len = ref_len = chunks = 0
    exact = True
    for h, r in zip(hypotheses, references):
        ht = word_tokenize(h, lowercase)
        rt = word_tokenize(r, lowercase)
        sm, sc, ex = min_chunk_alignment(ht, rt)
        m += sm
        chunks += sc
        hyp_len += len(ht)
        ref_len += len(rt)
        exact = exact and ex
    return SegmentScore(
        meteor_score(m, hyp_len, ref_len, chunks),
        {"matches": m, "chunks": chunks, "hyp_len": hyp_len, "ref_len": ref_len, "exact": exact},
    )


def meteor(hypothesis: str, reference: str, lowercase: bool = False) -> SegmentScore:
    return meteor_corpus([hypothesis], [reference], lowercase)
