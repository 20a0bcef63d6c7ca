"""The five-metric evaluation battery: BLEU, TER, RIBES, METEOR, chrF."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from lrmt.errors import InvalidConfig
from lrmt.langs import LanguageTag
from lrmt.metrics._common import SegmentScore, check_corpus
from lrmt.metrics.bleu import bleu_corpus, bleu_sentence
from lrmt.metrics.chrf import chrf_corpus
from lrmt.metrics.meteor import meteor, meteor_corpus
from lrmt.metrics.ribes import ribes, ribes_corpus
from lrmt.metrics.ter import ter, ter_corpus

__all__ = [
    "SegmentScore",
    "MetricReport",
    "bleu_corpus",
    "bleu_sentence",
    "ter",
    "ter_corpus",
    "ribes",
    "ribes_corpus",
    "meteor",
    "meteor_corpus",
    "chrf_corpus",
    "evaluate_all",
]


@dataclass
class MetricReport:
    bleu: float
    ter: float
    ribes: float
    meteor: float
    chrf: float
    direction: tuple[LanguageTag, LanguageTag]
    n_segments: int
    test_set: str | None = None
    aux: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.n_segments < 1:
            raise InvalidConfig("a metric report needs at least one segment")
        if self.test_set is None:
            src, tgt = self.direction
            self.test_set = f"{src.short}_to_{tgt.short}"

    @property
    def language_pair(self) -> str:
        src, tgt = self.direction
        # the non-English side names the pair, English first
        names = [src.name, tgt.name]
        if tgt.iso639_3 == "eng":
            names.reverse()
        return "-".join(names)

    def to_dict(self) -> dict[str, Any]:
        return {
            "direction": [str(self.direction[0]), str(self.direction[1])],
            "test_set": self.test_set,
            "n_segments": self.n_segments,
            "bleu": self.bleu,
            "ter": self.ter,
            "ribes": self.ribes,
            "meteor": self.meteor,
            "chrf": self.chrf,
            "aux": self.aux,
        }


def evaluate_all(
    hypotheses: list[str],
    references: list[str],
    direction: tuple[LanguageTag, LanguageTag],
    lowercase: bool = False,
    test_set: str | None = None,
) -> MetricReport:
    """Score a system output with all five metrics at their default settings."""
    check_corpus(hypotheses, references)
    scores = {
        "bleu": bleu_corpus(hypotheses, references, lowercase=lowercase),
        "ter": ter_corpus(hypotheses, references, lowercase=lowercase),
        "ribes": ribes_corpus(hypotheses, references, lowercase=lowercase),
        "meteor": meteor_corpus(hypotheses, references, lowercase=lowercase),
        "chrf": chrf_corpus(hypotheses, references, lowercase=lowercase),
    }
    return MetricReport(
        direction=direction,
        n_segments=len(hypotheses),
        test_set=test_set,
        aux={name: s.aux for name, s in scores.items()},
        **{name: s.value for name, s in scores.items()},
    )
