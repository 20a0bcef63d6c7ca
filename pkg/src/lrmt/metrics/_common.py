from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from lrmt.errors import EmptyInput, LengthMismatch


@dataclass
class SegmentScore:
    value: float
    aux: dict[str, Any] = field(default_factory=dict)

    def __float__(self) -> float:
        return float(self.value)


def check_corpus(hypotheses, references) -> None:
    if len(hypotheses) != len(references):
        raise LengthMismatch(len(hypotheses), len(references), "hypotheses and references")
    if not hypotheses:
        raise EmptyInput("at least one segment is required")
