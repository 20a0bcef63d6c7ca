"""Code-point classes derived from the interpreter's Unicode database.

Built once, lazily, as regex character classes: a full scan of the code
space takes a few hundred milliseconds, after which matching is done by the
regex engine rather than per-character ``unicodedata`` calls.

``re`` compiles a BMP-only class to a bitmap. Mixing in astral ranges makes
it fall back to a linear range scan that is ~30x slower, so classes are kept
split at U+FFFF and the astral half only runs on lines that need it.
"""

from __future__ import annotations

import functools
import re
import sys
import unicodedata

NONPRINTABLE_CATEGORIES = frozenset({"Cc", "Cf", "Cs", "Co", "Cn"})

ASTRAL_RE = re.compile("[\\U00010000-\\U0010ffff]")

Ranges = list[tuple[int, int]]


_CATEGORY_NAMES = (
    "Lu Ll Lt Lm Lo Mn Mc Me Nd Nl No Pc Pd Ps Pe Pi Pf Po Sm Sc Sk So "
    "Zs Zl Zp Cc Cf Cs Co Cn"
).split()


@functools.lru_cache(maxsize=None)
def _category_table(astral: bool) -> bytes:
    """One byte per code point of the BMP or of the astral planes: index into
    ``_CATEGORY_NAMES``. The astral half costs ~1 s and is only built when a
    line actually contains astral characters."""
    index = {name: i for i, name in enumerate(_CATEGORY_NAMES)}
    category = unicodedata.category
    lo, hi = (0x10000, sys.maxunicode) if astral else (0, 0xFFFF)
    return bytes(index[category(chr(cp))] for cp in range(lo, hi + 1))


def _ranges(pred, lo: int = 0, hi: int = sys.maxunicode) -> Ranges:
    if lo <= 0xFFFF < hi:
        return _ranges(pred, lo, 0xFFFF) + _ranges(pred, 0x10000, hi)
    astral = lo > 0xFFFF
    table = _category_table(astral)
    base = 0x10000 if astral else 0
    hits = [pred(name) for name in _CATEGORY_NAMES]
    out: Ranges = []
    start = None
    for cp in range(lo, hi + 1):
        if hits[table[cp - base]]:
            if start is None:
                start = cp
        elif start is not None:
            out.append((start, cp - 1))
            start = None
    if start is not None:
        out.append((start, hi))
    return out


def _esc(cp: int) -> str:
    return f"\\U{cp:08x}"


def char_class(ranges: Ranges, negate: bool = False) -> str:
    body = "".join(_esc(a) if a == b else f"{_esc(a)}-{_esc(b)}" for a, b in ranges)
    return f"[{'^' if negate else ''}{body}]"


def _is_nonprintable(c: str) -> bool:
    return c in NONPRINTABLE_CATEGORIES


@functools.lru_cache(maxsize=None)
def bmp_nonprintable_ranges() -> Ranges:
    return _ranges(_is_nonprintable, 0, 0xFFFF)


@functools.lru_cache(maxsize=None)
def nonprintable_bmp_re() -> re.Pattern:
    """Pattern matching one Cc/Cf/Cs/Co/Cn code point in the BMP."""
    return re.compile(char_class(bmp_nonprintable_ranges()))


@functools.lru_cache(maxsize=None)
def nonprintable_astral_re() -> re.Pattern:
    return re.compile(char_class(_ranges(_is_nonprintable, 0x10000)))


def other_whitespace_ranges() -> Ranges:
    """Every whitespace code point except U+0020 (all are in the BMP)."""
    return [(cp, cp) for cp in range(0x10000) if chr(cp).isspace() and cp != 0x20]


def _is_word_category(c: str) -> bool:
    return c[0] in "LM" or c == "Nd"


def _is_separator(c: str) -> bool:
    return not _is_word_category(c)


@functools.lru_cache(maxsize=None)
def separator_bmp_re() -> re.Pattern:
    """Pattern capturing one BMP code point that is neither a letter, a
    decimal digit nor a mark."""
    return re.compile(f"({char_class(_ranges(_is_separator, 0, 0xFFFF))})")


@functools.lru_cache(maxsize=None)
def separator_astral_re() -> re.Pattern:
    return re.compile(f"({char_class(_ranges(_is_separator, 0x10000))})")
