"""Line-level text cleaning.

Three stages run in a fixed order, followed by whitespace folding:

1. :func:`normalize_punctuation`, a closed port of the usual Moses
   punctuation rules (quotes, dashes, ellipsis, NBSP, spacing);
2. :func:`replace_nonprintable`, which turns every Cc/Cf/Cs/Co/Cn code point
   into a space;
3. :func:`nfkc`.

:func:`clean_line` composes them. A few NFKC outputs (e.g. U+FE58 becomes an
em dash) or spaces produced by stage 2 in front of punctuation are only
caught by a second pass, so ``clean_line`` re-applies the composition until
the line stops changing. In practice that is at most two passes and only for
lines that contain such characters.
"""

from __future__ import annotations

import functools
import re
import unicodedata
from collections.abc import Iterable, Iterator
from concurrent.futures import ProcessPoolExecutor

from lrmt._unicode import (
    ASTRAL_RE,
    bmp_nonprintable_ranges,
    char_class,
    nonprintable_astral_re,
    nonprintable_bmp_re,
    other_whitespace_ranges,
)

__all__ = [
    "normalize_punctuation",
    "replace_nonprintable",
    "nfkc",
    "clean_line",
    "clean_lines",
    "is_clean",
]

# rule 1
_DELETE = {0x200B: None, 0xFEFF: None, 0x00AD: None}
# rules 2 (without guillemet padding), 3, 4, 5, 6; all outputs are ASCII so
# the order among them does not matter
_MAP = {
    0x201E: '"', 0x201C: '"', 0x201D: '"', 0x00AB: '"', 0x00BB: '"',
    0x201A: "'", 0x2018: "'", 0x2019: "'", 0x2039: "'", 0x203A: "'",
    0x2013: "-", 0x2014: "-", 0x2015: "-",
    0x2026: "...",
    0x00A0: " ",
}
_DELETE_TABLE = str.maketrans(_DELETE)
_MAP_TABLE = str.maketrans(_MAP)
_ALL_TABLE = str.maketrans({**_DELETE, **_MAP})

_GUILLEMET_OPEN_RE = re.compile("« +")
_GUILLEMET_CLOSE_RE = re.compile(" +»")
_MAPPED_CHAR_RE = re.compile("[" + "".join(chr(cp) for cp in sorted({*_DELETE, *_MAP})) + "]")
_SPACE_BEFORE_PUNCT_RE = re.compile(r" +(?=[,.!?;:%)])")
_SPACE_RUN_RE = re.compile(r" {2,}")

# anything normalize_punctuation would still change in an otherwise clean line
_REPASS_RE = re.compile(_MAPPED_CHAR_RE.pattern + "| [,.!?;:%)]")
_MAX_PASSES = 8

_ASCII_CONTROL_TABLE = str.maketrans({cp: " " for cp in [*range(32), 127]})


def normalize_punctuation(line: str) -> str:
    """Apply the ordered punctuation rule table once.

    >>> normalize_punctuation("wait… no – yes")
    'wait... no - yes'
    """
    if _MAPPED_CHAR_RE.search(line):
        if "«" in line or "»" in line:
            line = line.translate(_DELETE_TABLE)
            line = _GUILLEMET_OPEN_RE.sub('"', line)
            line = _GUILLEMET_CLOSE_RE.sub('"', line)
            line = line.translate(_MAP_TABLE)
        else:
            line = line.translate(_ALL_TABLE)
    if _SPACE_BEFORE_PUNCT_RE.search(line):
        line = _SPACE_BEFORE_PUNCT_RE.sub("", line)
    if "  " in line:
        line = _SPACE_RUN_RE.sub(" ", line)
    return line.strip(" ")


def replace_nonprintable(line: str) -> str:
    """Replace each Cc, Cf, Cs, Co or Cn code point with a single space."""
    if line.isascii():
        return line.translate(_ASCII_CONTROL_TABLE)
    line = nonprintable_bmp_re().sub(" ", line)
    if ASTRAL_RE.search(line):
        line = nonprintable_astral_re().sub(" ", line)
    return line


# U+0020 is NFKC-stable: it never reorders or composes with a neighbour, so
# a line is normalized iff each space-separated piece is. Many Bengali
# vowel signs make the library quick check answer "maybe" and fall back to
# a full normalization; caching the verdict per word avoids that.
_NFKC_WORDS: dict[str, bool] = {}
_NFKC_WORDS_MAX = 500_000


def is_nfkc(line: str) -> bool:
    if line.isascii():
        return True
    cache = _NFKC_WORDS
    for word in line.split(" "):
        ok = cache.get(word)
        if ok is None:
            ok = unicodedata.is_normalized("NFKC", word)
            if len(cache) < _NFKC_WORDS_MAX:
                cache[word] = ok
        if not ok:
            return False
    return True


def nfkc(line: str) -> str:
    if is_nfkc(line):
        return line
    return unicodedata.normalize("NFKC", line)


def _clean_once(line: str) -> str:
    line = nfkc(replace_nonprintable(normalize_punctuation(line)))
    # str.split() folds exactly the \s class: all Unicode whitespace
    return " ".join(line.split())


def _dirty_ranges(ascii_only: bool) -> list[tuple[int, int]]:
    ranges = (
        [(cp, cp) for cp in sorted({*_DELETE, *_MAP})]
        + bmp_nonprintable_ranges()
        + other_whitespace_ranges()
        + [(0x10000, 0x10FFFF)]
    )
    if ascii_only:
        ranges = [(lo, min(hi, 0x7F)) for lo, hi in ranges if lo <= 0x7F]
    return sorted(ranges)


@functools.lru_cache(maxsize=None)
def _dirty_re(ascii_only: bool = False) -> re.Pattern:
    # a line with no match here (and NFKC-normalized, unpadded) is a fixed point;
    # the ascii-only variant is the same test restricted to ASCII lines
    return re.compile(char_class(_dirty_ranges(ascii_only)) + "| [ ,.!?;:%)]")


def clean_line(line: str) -> str:
    """Full cleaning: punctuation, non-printables, NFKC, whitespace folding.

    Total and idempotent; the result is NFKC-normalized, contains no
    Cc/Cf/Cs/Co/Cn code point, and has single inner spaces and no padding.
    """
    if line.isascii():
        if not _dirty_re(True).search(line) and not line.startswith(" ") and not line.endswith(" "):
            return line
    elif not _dirty_re().search(line) and not line.startswith(" ") and not line.endswith(" ") and is_nfkc(line):
        return line
    out = _clean_once(line)
    for _ in range(_MAX_PASSES):
        if not _REPASS_RE.search(out):
            break
        again = _clean_once(out)
        if again == out:
            break
        out = again
    return out


def is_clean(line: str) -> bool:
    return clean_line(line) == line


def _clean_chunk(lines: list[str]) -> list[str]:
    return [clean_line(x) for x in lines]


def clean_lines(lines: Iterable[str], jobs: int = 1, chunk_size: int = 20_000) -> Iterator[str]:
    """Clean many lines, optionally across ``jobs`` worker processes.

    Output order always follows input order.
    """
    if jobs <= 1:
        for x in lines:
            yield clean_line(x)
        return

    def chunks():
        buf: list[str] = []
        for x in lines:
            buf.append(x)
            if len(buf) >= chunk_size:
                yield buf
                buf = []
        if buf:
            yield buf

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for cleaned in pool.map(_clean_chunk, chunks()):
            yield from cleaned
