"""Word and character n-gram extraction shared by every metric."""

from __future__ import annotations

import functools
from collections import Counter

from lrmt._unicode import ASTRAL_RE, separator_astral_re, separator_bmp_re
from lrmt.errors import InvalidOrder

__all__ = ["simple_casefold", "word_tokenize", "word_ngrams", "char_ngrams", "strip_whitespace"]


@functools.lru_cache(maxsize=65536)
def _fold_char(c: str) -> str:
    # Unicode simple case folding keeps one code point per code point; Python
    # only ships full folding, so fall back to lower() and then to identity
    # whenever the full mapping would expand.
    folded = c.casefold()
    if len(folded) == 1:
        return folded
    lowered = c.lower()
    return lowered if len(lowered) == 1 else c


def simple_casefold(text: str) -> str:
    if text.isascii():
        return text.lower()
    return "".join(map(_fold_char, text))


def word_tokenize(text: str, lowercase: bool = False) -> list[str]:
    """Split ``text`` into tokens.

    Every code point that is not a letter, decimal digit or combining mark
    becomes its own token; runs of the rest are split on whitespace.

    >>> word_tokenize("Hello, world!")
    ['Hello', ',', 'world', '!']
    """
    if lowercase:
        text = simple_casefold(text)
    text = separator_bmp_re().sub(r" \1 ", text)
    if ASTRAL_RE.search(text):
        text = separator_astral_re().sub(r" \1 ", text)
    return text.split()


def word_ngrams(tokens: list[str], n: int) -> Counter:
    if n < 1:
        raise InvalidOrder(n)
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def strip_whitespace(text: str) -> str:
    return "".join(text.split())


def char_ngrams(text: str, n: int) -> Counter:
    """Character n-grams of ``text`` after all whitespace has been removed."""
    if n < 1:
        raise InvalidOrder(n)
    s = strip_whitespace(text)
    return Counter(s[i : i + n] for i in range(len(s) - n + 1))
