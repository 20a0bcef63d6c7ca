"""Evaluation tables in the usual MT results layout."""

from __future__ import annotations

from collections.abc import Sequence
from typing import Any

from lrmt.errors import EmptyInput
from lrmt.metrics import MetricReport

__all__ = ["COLUMNS", "format_score", "emit_eval_report"]

COLUMNS = ("Language Pairs", "Test Set", "BLEU", "TER", "RIBES", "METEOR", "ChrF")
# decimals per metric column; 0-1 scales get four
_DECIMALS = {"bleu": 2, "ter": 2, "ribes": 4, "meteor": 4, "chrf": 2}


def format_score(value: float, decimals: int, trim: bool = False) -> str:
    """Round to ``decimals``; ``trim`` drops trailing zeros the way result
    tables are often typeset (0.5130 -> 0.513, 65.20 -> 65.2)."""
    text = f"{value:.{decimals}f}"
    if trim and "." in text:
        text = text.rstrip("0").rstrip(".")
    return text


def emit_eval_report(reports: Sequence[MetricReport], trim: bool = False) -> tuple[str, list[dict[str, Any]]]:
    """Render one row per report: (aligned text table, JSON rows).

    The language-pair name is printed once per run of consecutive rows for
    the same pair. JSON rows keep full precision.
    """
    if not reports:
        raise EmptyInput("no metric reports to render")
    rows = []
    prev_pair = None
    for r in reports:
        pair = r.language_pair
        cells = [pair if pair != prev_pair else "", r.test_set]
        cells += [format_score(getattr(r, k), d, trim) for k, d in _DECIMALS.items()]
        rows.append(cells)
        prev_pair = pair
    widths = [max(len(c) for c in col) for col in zip(COLUMNS, *rows)]

    def fmt(cells):
        left = [c.ljust(w) for c, w in zip(cells[:2], widths[:2])]
        right = [c.rjust(w) for c, w in zip(cells[2:], widths[2:])]
        return "  ".join(left + right).rstrip()

    lines = [fmt(COLUMNS), "  ".join("-" * w for w in widths)]
    lines += [fmt(r) for r in rows]
    doc = [{"language_pair": r.language_pair, **r.to_dict()} for r in reports]
    return "\n".join(lines) + "\n", doc
