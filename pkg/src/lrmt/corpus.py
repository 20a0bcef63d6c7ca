"""Parallel and monolingual corpora: ingestion, dedup, filtering, merging, stats.

Corpora are immutable. Every operation returns a new :class:`Corpus` and
keeps input order unless it says otherwise.
"""

from __future__ import annotations

import json
import os
import random
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import IO, Any

from lrmt.errors import (
    EmptyInput,
    InvalidConfig,
    InvalidRecord,
    LanguageMismatch,
    LineCountMismatch,
    MalformedRow,
    Utf8Error,
)
from lrmt.langs import ENGLISH, LanguageTag
from lrmt.normalize import clean_lines

__all__ = [
    "Origin",
    "SyntheticSide",
    "SentencePair",
    "Corpus",
    "FilterReport",
    "FilterSettings",
    "SourceBreakdown",
    "read_text_lines",
    "ingest_parallel",
    "ingest_tsv",
    "ingest_monolingual",
    "dedup",
    "filter_pairs",
    "merge",
    "flip",
    "stats",
    "split",
    "write_jsonl",
    "read_jsonl",
    "write_lines",
]


class Origin(str, Enum):
    WMT = "WMT"
    BPCC = "BPCC"
    PMIndia = "PMIndia"
    OLD = "OLD"
    BackTranslated = "BackTranslated"
    Other = "Other"


class SyntheticSide(str, Enum):
    NONE = "none"
    SOURCE = "source"
    TARGET = "target"


@dataclass(frozen=True, slots=True)
class SentencePair:
    source_lang: LanguageTag
    target_lang: LanguageTag
    source_text: str
    target_text: str
    origin: Origin
    synthetic_side: SyntheticSide = SyntheticSide.NONE

    def __post_init__(self):
        if self.source_lang == self.target_lang:
            raise InvalidConfig(f"source and target language are both {self.source_lang}")
        if (self.synthetic_side is not SyntheticSide.NONE) != (self.origin is Origin.BackTranslated):
            raise InvalidConfig("synthetic_side must be set exactly for back-translated pairs")

    @property
    def key(self) -> tuple[str, str]:
        return (self.source_text, self.target_text)

    def to_record(self) -> dict[str, str]:
        return {
            "src": self.source_text,
            "tgt": self.target_text,
            "src_lang": str(self.source_lang),
            "tgt_lang": str(self.target_lang),
            "origin": self.origin.value,
            "synthetic_side": self.synthetic_side.value,
        }


@dataclass(frozen=True)
class Corpus:
    """Either a parallel corpus (``pairs``) or a monolingual one (``lines`` + ``lang``)."""

    pairs: tuple[SentencePair, ...] | None = None
    lines: tuple[str, ...] | None = None
    lang: LanguageTag | None = None
    provenance: str = ""
    # (source_lang, target_lang); only meaningful for an empty parallel corpus
    _direction: tuple[LanguageTag, LanguageTag] | None = field(default=None, repr=False)

    def __post_init__(self):
        if (self.pairs is None) == (self.lines is None):
            raise InvalidConfig("a corpus holds either pairs or lines")
        if self.lines is not None and self.lang is None:
            raise InvalidConfig("a monolingual corpus needs a language")
        if self.pairs:
            direction = (self.pairs[0].source_lang, self.pairs[0].target_lang)
            for p in self.pairs:
                if (p.source_lang, p.target_lang) != direction:
                    raise LanguageMismatch(
                        f"mixed directions in one corpus: {direction[0]}->{direction[1]} "
                        f"and {p.source_lang}->{p.target_lang}"
                    )
            object.__setattr__(self, "_direction", direction)

    @classmethod
    def parallel(
        cls,
        pairs: Iterable[SentencePair],
        provenance: str = "",
        direction: tuple[LanguageTag, LanguageTag] | None = None,
    ) -> Corpus:
        return cls(pairs=tuple(pairs), provenance=provenance, _direction=direction)

    @classmethod
    def monolingual(cls, lines: Iterable[str], lang: LanguageTag, provenance: str = "") -> Corpus:
        return cls(lines=tuple(lines), lang=lang, provenance=provenance)

    @property
    def is_parallel(self) -> bool:
        return self.pairs is not None

    @property
    def direction(self) -> tuple[LanguageTag, LanguageTag] | None:
        return self._direction

    def __len__(self) -> int:
        return len(self.pairs if self.pairs is not None else self.lines)

    def __iter__(self):
        return iter(self.pairs if self.pairs is not None else self.lines)

    def _derive(self, pairs: Iterable[SentencePair], note: str) -> Corpus:
        prov = f"{self.provenance} | {note}" if self.provenance else note
        return Corpus.parallel(pairs, prov, self._direction)


def _require_parallel(corpus: Corpus, op: str) -> None:
    if not corpus.is_parallel:
        raise InvalidConfig(f"{op} needs a parallel corpus")


def _as_fraction(x) -> Fraction:
    # str() first so 0.1 means one tenth, not the nearest double
    return x if isinstance(x, Fraction) else Fraction(str(x))


# ---------------------------------------------------------------- ingestion


def read_text_lines(path: str | os.PathLike) -> list[str]:
    """Read a UTF-8 file as lines; LF or CRLF endings, final newline optional."""
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise Utf8Error(os.fspath(path), data.count(b"\n", 0, e.start) + 1) from None
    if not text:
        return []
    lines = text.split("\n")
    if text.endswith("\n"):
        lines.pop()
    if "\r" in text:
        lines = [ln[:-1] if ln.endswith("\r") else ln for ln in lines]
    return lines


def _ingest_side(origin: Origin, source_lang: LanguageTag, side) -> SyntheticSide:
    # pre-made back-translations: the English side is the engine output
    if side is not None:
        return SyntheticSide(side)
    if origin is not Origin.BackTranslated:
        return SyntheticSide.NONE
    return SyntheticSide.SOURCE if source_lang == ENGLISH else SyntheticSide.TARGET


def _make_pairs(src, tgt, source_lang, target_lang, origin, side=SyntheticSide.NONE):
    return [SentencePair(source_lang, target_lang, s, t, origin, side) for s, t in zip(src, tgt)]


def ingest_parallel(
    source_file: str | os.PathLike,
    target_file: str | os.PathLike,
    source_lang: LanguageTag,
    target_lang: LanguageTag,
    origin: Origin,
    jobs: int = 1,
    synthetic_side: SyntheticSide | None = None,
) -> Corpus:
    origin = Origin(origin)
    side = _ingest_side(origin, source_lang, synthetic_side)
    src = read_text_lines(source_file)
    tgt = read_text_lines(target_file)
    if len(src) != len(tgt):
        raise LineCountMismatch(len(src), len(tgt))
    pairs = _make_pairs(
        clean_lines(src, jobs=jobs), clean_lines(tgt, jobs=jobs), source_lang, target_lang, origin, side
    )
    return Corpus.parallel(
        pairs, f"{origin.value}:{os.fspath(source_file)}+{os.fspath(target_file)}", (source_lang, target_lang)
    )


def ingest_tsv(
    file: str | os.PathLike,
    source_lang: LanguageTag,
    target_lang: LanguageTag,
    origin: Origin,
    jobs: int = 1,
    synthetic_side: SyntheticSide | None = None,
) -> Corpus:
    origin = Origin(origin)
    side = _ingest_side(origin, source_lang, synthetic_side)
    src, tgt = [], []
    for i, row in enumerate(read_text_lines(file), 1):
        cols = row.split("\t")
        if len(cols) != 2:
            raise MalformedRow(i, len(cols))
        src.append(cols[0])
        tgt.append(cols[1])
    pairs = _make_pairs(
        clean_lines(src, jobs=jobs), clean_lines(tgt, jobs=jobs), source_lang, target_lang, origin, side
    )
    return Corpus.parallel(pairs, f"{origin.value}:{os.fspath(file)}", (source_lang, target_lang))


def ingest_monolingual(path: str | os.PathLike, lang: LanguageTag, jobs: int = 1) -> Corpus:
    return Corpus.monolingual(clean_lines(read_text_lines(path), jobs=jobs), lang, f"mono:{os.fspath(path)}")


# ---------------------------------------------------------------- cleaning


def dedup(corpus: Corpus) -> tuple[Corpus, int]:
    """Drop repeated (source, target) pairs, keeping the first of each."""
    _require_parallel(corpus, "dedup")
    seen = set()
    kept = []
    for p in corpus.pairs:
        k = p.key
        if k not in seen:
            seen.add(k)
            kept.append(p)
    removed = len(corpus) - len(kept)
    if not removed:
        return corpus, 0
    return corpus._derive(kept, f"dedup(-{removed})"), removed


@dataclass(frozen=True)
class FilterReport:
    input_pairs: int
    kept: int
    too_short: int
    too_long: int
    bad_ratio: int

    @property
    def dropped(self) -> int:
        return self.too_short + self.too_long + self.bad_ratio


def filter_pairs(
    corpus: Corpus,
    min_chars: int = 1,
    max_chars: int = 2000,
    max_len_ratio: Fraction | int | float | str = 3,
) -> tuple[Corpus, FilterReport]:
    """Drop pairs by side length and length ratio (in code points).

    Each dropped pair is charged to the first rule it fails, in the order
    too short, too long, bad ratio.
    """
    _require_parallel(corpus, "filter")
    ratio = _as_fraction(max_len_ratio)
    if min_chars < 0 or min_chars > max_chars:
        raise InvalidConfig(f"need 0 <= min_chars <= max_chars, got {min_chars}, {max_chars}")
    if ratio < 1:
        raise InvalidConfig(f"max_len_ratio must be >= 1, got {max_len_ratio}")
    num, den = ratio.numerator, ratio.denominator
    kept = []
    short = long_ = bad = 0
    for p in corpus.pairs:
        a, b = len(p.source_text), len(p.target_text)
        lo, hi = (a, b) if a <= b else (b, a)
        if lo < min_chars:
            short += 1
        elif hi > max_chars:
            long_ += 1
        elif hi * den > num * lo and hi:
            # hi/lo > ratio, done in integers; lo == 0 < hi counts as infinite
            bad += 1
        else:
            kept.append(p)
    report = FilterReport(len(corpus), len(kept), short, long_, bad)
    if report.dropped == 0:
        return corpus, report
    return corpus._derive(kept, f"filter(-{report.dropped})"), report


@dataclass(frozen=True)
class FilterSettings:
    """Thresholds for :func:`filter_pairs`, bundled for configs and back-translation."""

    min_chars: int = 1
    max_chars: int = 2000
    max_len_ratio: Fraction = Fraction(3)

    def __post_init__(self):
        object.__setattr__(self, "max_len_ratio", _as_fraction(self.max_len_ratio))
        if self.min_chars < 0 or self.min_chars > self.max_chars:
            raise InvalidConfig(f"need 0 <= min_chars <= max_chars, got {self.min_chars}, {self.max_chars}")
        if self.max_len_ratio < 1:
            raise InvalidConfig(f"max_len_ratio must be >= 1, got {self.max_len_ratio}")

    def apply(self, corpus: Corpus) -> tuple[Corpus, FilterReport]:
        return filter_pairs(corpus, self.min_chars, self.max_chars, self.max_len_ratio)

    def to_json(self) -> dict[str, Any]:
        return {"min_chars": self.min_chars, "max_chars": self.max_chars, "max_len_ratio": str(self.max_len_ratio)}


def merge(corpora: Sequence[Corpus]) -> Corpus:
    """Concatenate parallel corpora of one direction, in argument order."""
    if not corpora:
        raise EmptyInput("merge needs at least one corpus")
    if len(corpora) == 1:
        return corpora[0]
    directions = set()
    for c in corpora:
        _require_parallel(c, "merge")
        if c.direction is not None:
            directions.add(c.direction)
    if len(directions) > 1:
        shown = ", ".join(sorted(f"{s}->{t}" for s, t in directions))
        raise LanguageMismatch(f"cannot merge corpora of different directions: {shown}")
    pairs = [p for c in corpora for p in c.pairs]
    prov = " + ".join(c.provenance or "?" for c in corpora)
    return Corpus.parallel(pairs, prov, next(iter(directions), None))


_FLIPPED_SIDE = {
    SyntheticSide.NONE: SyntheticSide.NONE,
    SyntheticSide.SOURCE: SyntheticSide.TARGET,
    SyntheticSide.TARGET: SyntheticSide.SOURCE,
}


def flip(corpus: Corpus) -> Corpus:
    """Swap source and target sides (and which side is marked synthetic)."""
    _require_parallel(corpus, "flip")
    pairs = [
        SentencePair(p.target_lang, p.source_lang, p.target_text, p.source_text, p.origin, _FLIPPED_SIDE[p.synthetic_side])
        for p in corpus.pairs
    ]
    direction = None if corpus.direction is None else corpus.direction[::-1]
    return Corpus.parallel(pairs, f"{corpus.provenance} | flipped", direction)


def split(corpus: Corpus, dev_fraction: Fraction | float | str, seed: int) -> tuple[Corpus, Corpus]:
    """Seeded random train/dev split with ``|dev| = floor(n * dev_fraction)``.

    Dev members are drawn with a seeded shuffle; both sides keep the
    original relative order so that a zero fraction returns the input as is.
    """
    _require_parallel(corpus, "split")
    frac = _as_fraction(dev_fraction)
    if not 0 <= frac < 1:
        raise InvalidConfig(f"dev_fraction must be in [0, 1), got {dev_fraction}")
    n = len(corpus)
    k = (n * frac.numerator) // frac.denominator
    order = list(range(n))
    random.Random(seed).shuffle(order)
    dev_idx = set(order[:k])
    train = [p for i, p in enumerate(corpus.pairs) if i not in dev_idx]
    dev = [p for i, p in enumerate(corpus.pairs) if i in dev_idx]
    return corpus._derive(train, f"train(seed={seed})"), corpus._derive(dev, f"dev(seed={seed})")


# ---------------------------------------------------------------- stats


_TABLE_ORIGINS = [
    (Origin.WMT, "WMT Parallel"),
    (Origin.BPCC, "BPCC"),
    (Origin.PMIndia, "PMIndia"),
    (Origin.OLD, "OLD"),
    (Origin.BackTranslated, "Back-Translated"),
]


@dataclass
class SourceBreakdown:
    counts: dict[tuple[LanguageTag, Origin], int] = field(default_factory=dict)

    @property
    def languages(self) -> list[LanguageTag]:
        return sorted({lang for lang, _ in self.counts})

    def count(self, lang: LanguageTag, origin: Origin) -> int:
        return self.counts.get((lang, origin), 0)

    def total(self, lang: LanguageTag) -> int:
        return sum(n for (lg, _), n in self.counts.items() if lg == lang)

    @property
    def grand_total(self) -> int:
        return sum(self.counts.values())

    def to_json(self) -> dict[str, Any]:
        out = {}
        for lang in self.languages:
            out[str(lang)] = {
                "origins": {o.value: self.count(lang, o) for o in Origin},
                "total": self.total(lang),
            }
        return {"languages": out, "total": self.grand_total}

    def to_table(self) -> str:
        headers = ["Language", "ISO-639-3"] + [label for _, label in _TABLE_ORIGINS]
        with_other = any(self.count(lg, Origin.Other) for lg in self.languages)
        if with_other:
            headers.append("Other")
        headers.append("Total")
        rows = []
        for lang in self.languages:
            cells = [lang.name, lang.iso639_3]
            cells += [f"{self.count(lang, o):,}" for o, _ in _TABLE_ORIGINS]
            if with_other:
                cells.append(f"{self.count(lang, Origin.Other):,}")
            cells.append(f"{self.total(lang):,}")
            rows.append(cells)
        widths = [max(len(r[i]) for r in [headers, *rows]) for i in range(len(headers))]

        def fmt(cells):
            first = cells[0].ljust(widths[0])
            return "  ".join([first] + [c.rjust(w) for c, w in zip(cells[1:], widths[1:])])

        lines = [fmt(headers), "  ".join("-" * w for w in widths)]
        lines += [fmt(r) for r in rows]
        return "\n".join(lines) + "\n"


def _counted_language(direction: tuple[LanguageTag, LanguageTag]) -> LanguageTag:
    src, tgt = direction
    return src if tgt == ENGLISH else tgt


def stats(corpora: Iterable[Corpus]) -> SourceBreakdown:
    """Pair counts per (non-English language, origin). Monolingual corpora are skipped."""
    counter: Counter = Counter()
    for c in corpora:
        if not c.is_parallel or not c.pairs:
            continue
        lang = _counted_language(c.direction)
        counter.update((lang, p.origin) for p in c.pairs)
    return SourceBreakdown(dict(counter))


# ---------------------------------------------------------------- io


_RECORD_KEYS = ("src", "tgt", "src_lang", "tgt_lang", "origin", "synthetic_side")


def write_jsonl(corpus: Corpus, out: str | os.PathLike | IO[str]) -> None:
    _require_parallel(corpus, "write_jsonl")
    if hasattr(out, "write"):
        for p in corpus.pairs:
            out.write(json.dumps(p.to_record(), ensure_ascii=False) + "\n")
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        write_jsonl(corpus, fh)


def write_lines(lines: Iterable[str], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line + "\n")


def read_jsonl(path: str | os.PathLike) -> Corpus:
    name = os.fspath(path)
    pairs = []
    direction = None
    for i, row in enumerate(read_text_lines(path), 1):
        if not row.strip():
            continue
        try:
            rec = json.loads(row)
        except json.JSONDecodeError as e:
            raise InvalidRecord(name, i, f"not JSON ({e.msg})") from None
        if not isinstance(rec, dict) or set(rec) != set(_RECORD_KEYS):
            raise InvalidRecord(name, i, f"expected keys {', '.join(_RECORD_KEYS)}")
        try:
            pair = SentencePair(
                LanguageTag.parse(rec["src_lang"]),
                LanguageTag.parse(rec["tgt_lang"]),
                rec["src"],
                rec["tgt"],
                Origin(rec["origin"]),
                SyntheticSide(rec["synthetic_side"]),
            )
        except (ValueError, InvalidConfig) as e:
            raise InvalidRecord(name, i, str(e)) from None
        if not isinstance(pair.source_text, str) or not isinstance(pair.target_text, str):
            raise InvalidRecord(name, i, "src and tgt must be strings")
        if direction is None:
            direction = (pair.source_lang, pair.target_lang)
        elif direction != (pair.source_lang, pair.target_lang):
            raise InvalidRecord(name, i, "direction differs from earlier records")
        pairs.append(pair)
    return Corpus.parallel(pairs, f"jsonl:{name}", direction)
