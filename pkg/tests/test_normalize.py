import json
import sys
import unicodedata
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrmt.normalize import (
    clean_line,
    clean_lines,
    is_clean,
    nfkc,
    normalize_punctuation,
    replace_nonprintable,
)
from oracles import clean_oracle, nonprintable_oracle, punct_oracle

GOLDEN = Path(__file__).parent / "data" / "normalize_golden.jsonl"
BAD_CATEGORIES = {"Cc", "Cf", "Cs", "Co", "Cn"}


def load_golden():
    with open(GOLDEN, encoding="utf-8") as f:
        return [json.loads(line) for line in f]


@pytest.mark.parametrize(
    "raw, expected",
    [
        ("“Hello”", '"Hello"'),
        ("a  b ", "a b"),
        ("wait… no – yes", "wait... no - yes"),
        ("«  Bonjour  »", '"Bonjour"'),
        ("‹x› ‚y‘", "'x' 'y'"),
        ("a b", "a b"),
        ("a , b ;c )", "a, b;c)"),
        ("zero​width­soft﻿", "zerowidthsoft"),
        ("100 %", "100%"),
    ],
)
def test_normalize_punctuation(raw, expected):
    assert normalize_punctuation(raw) == expected


@pytest.mark.parametrize(
    "raw, expected",
    [("a\u0007b", "a b"), ("ab", "ab"), ("x‎y", "x y"), ("pq", "p q"), ("\U000e0080", " ")],
)
def test_replace_nonprintable(raw, expected):
    assert replace_nonprintable(raw) == expected


@pytest.mark.parametrize("raw, expected", [("ﬁ", "fi"), ("abc", "abc"), ("①", "1")])
def test_nfkc(raw, expected):
    assert nfkc(raw) == expected


@pytest.mark.parametrize(
    "raw, expected",
    [("“a\u0007b”", '"a b"'), ("", ""), ('"already clean."', '"already clean."')],
)
def test_clean_line_examples(raw, expected):
    assert clean_line(raw) == expected


def test_second_pass_catches_nfkc_punctuation():
    # U+FE58 is NFKC-equivalent to an em dash, which the rule table maps to '-'
    assert clean_line("a﹘b") == "a-b"
    # U+0007 becomes a space in front of a comma
    assert clean_line("a\u0007, b") == "a, b"


def test_golden_corpus_fast_path_matches():
    cases = load_golden()
    assert len(cases) >= 200
    for case in cases:
        assert clean_line(case["input"]) == case["expected"], case


def test_golden_corpus_idempotent():
    for case in load_golden():
        out = clean_line(case["input"])
        assert clean_line(out) == out


def test_punctuation_and_nonprintable_match_oracles_on_golden_inputs():
    for case in load_golden():
        x = case["input"]
        assert normalize_punctuation(x) == punct_oracle(x)
        assert replace_nonprintable(x) == nonprintable_oracle(x)


def test_clean_lines_parallel_preserves_order():
    lines = [case["input"] for case in load_golden()] * 3
    expected = [clean_line(x) for x in lines]
    assert list(clean_lines(lines, jobs=2, chunk_size=17)) == expected


def test_is_clean():
    assert is_clean("a b")
    assert not is_clean("a  b")


every_char = st.characters(min_codepoint=0, max_codepoint=sys.maxunicode, blacklist_characters="\n\r")


@settings(max_examples=400, deadline=None)
@given(st.text(alphabet=every_char, max_size=40))
def test_clean_line_properties(x):
    out = clean_line(x)
    assert clean_line(out) == out
    assert unicodedata.normalize("NFKC", out) == out
    assert not any(unicodedata.category(c) in BAD_CATEGORIES for c in out)
    assert out == out.strip()
    assert "  " not in out
    assert out == clean_oracle(x)


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet=every_char, max_size=40))
def test_replace_nonprintable_preserves_printables(x):
    out = replace_nonprintable(x)
    assert len(out) == len(x)
    keep = [c for c in x if unicodedata.category(c) not in BAD_CATEGORIES]
    assert [c for c in out if c != " "] == [c for c in keep if c != " "]
