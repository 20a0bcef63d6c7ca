"""Back-translation: budgeted selection, engine calls, synthetic pairs.

Monolingual lines in the low-resource language are translated into English
by an engine. Each synthetic pair puts the machine output on the source
side and the authentic line on the target side.

Engines speak a tiny JSON protocol (``POST /translate``). :class:`MockEngine`
implements the same interface in-process so everything runs offline.
"""

from __future__ import annotations

import codecs
import json
import logging
import os
import threading
import time
import urllib.error
import urllib.request
from collections.abc import Callable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import IO, Protocol

from lrmt.corpus import Corpus, FilterSettings, Origin, SentencePair, SyntheticSide
from lrmt.errors import (
    EngineRequestFailed,
    EngineUnavailable,
    InvalidConfig,
    LengthMismatch,
    ProtocolViolation,
)
from lrmt.langs import ENGLISH, LanguageTag
from lrmt.normalize import clean_line

log = logging.getLogger(__name__)

__all__ = [
    "BudgetSpec",
    "select_budget",
    "EngineClient",
    "MockEngine",
    "HttpEngine",
    "make_engine",
    "RetryPolicy",
    "translate_batch",
    "build_synthetic",
    "BtIterationRecord",
    "bt_iterate",
    "write_audit_log",
]


@dataclass(frozen=True)
class BudgetSpec:
    """Character budget, counted in code points with newlines excluded."""

    char_budget: int

    def __post_init__(self):
        if not isinstance(self.char_budget, int) or self.char_budget <= 0:
            raise InvalidConfig(f"char_budget must be a positive integer, got {self.char_budget!r}")


def _budget_prefix(lines: Sequence[str], budget: BudgetSpec) -> int:
    total = 0
    for i, line in enumerate(lines):
        total += len(line)
        if total > budget.char_budget:
            return i
    return len(lines)


def select_budget(mono: Corpus, budget: BudgetSpec) -> Corpus:
    """Longest prefix of lines whose total length fits in the budget."""
    if mono.is_parallel:
        raise InvalidConfig("select_budget needs a monolingual corpus")
    n = _budget_prefix(mono.lines, budget)
    return Corpus.monolingual(mono.lines[:n], mono.lang, f"{mono.provenance} | budget({budget.char_budget})")


# ---------------------------------------------------------------- engines


class EngineClient(Protocol):
    engine_id: str

    def translate(self, texts: list[str], src_lang: LanguageTag, tgt_lang: LanguageTag) -> list[str]:
        """Translate one request. Raise EngineRequestFailed for retryable failures."""


_ROT13 = codecs.getencoder("rot13")


def _cipher(text: str) -> str:
    return _ROT13(text)[0][::-1]


class MockEngine:
    """Offline engine.

    ``identity`` returns its input; ``cipher`` applies rot13 and reverses the
    string, which is its own inverse and keeps lengths, so tests can check
    which output belongs to which input. ``fail_first`` makes that many calls
    fail with a retryable error; ``extra_output`` breaks the protocol by
    returning one translation too many.
    """

    def __init__(
        self,
        mode: str = "identity",
        engine_id: str | None = None,
        fail_first: int = 0,
        extra_output: bool = False,
    ):
        if mode not in ("identity", "cipher"):
            raise InvalidConfig(f"unknown mock mode {mode!r}")
        self.mode = mode
        self.engine_id = engine_id or f"mock:{mode}"
        self.fail_first = fail_first
        self.extra_output = extra_output
        self.calls: list[tuple[str, ...]] = []
        self._lock = threading.Lock()

    def translate(self, texts, src_lang, tgt_lang):
        with self._lock:
            self.calls.append(tuple(texts))
            if self.fail_first > 0:
                self.fail_first -= 1
                raise EngineRequestFailed("injected failure")
        out = list(texts) if self.mode == "identity" else [_cipher(t) for t in texts]
        if self.extra_output:
            out.append("")
        return out

    @property
    def sent_lines(self) -> list[str]:
        return [t for call in self.calls for t in call]


class HttpEngine:
    """Client for the JSON translation protocol over HTTP."""

    def __init__(self, url: str, timeout: float = 60.0, engine_id: str | None = None):
        self.url = url.rstrip("/") + "/translate"
        self.timeout = timeout
        self.engine_id = engine_id or url

    def translate(self, texts, src_lang, tgt_lang):
        body = json.dumps({"texts": list(texts), "src_lang": str(src_lang), "tgt_lang": str(tgt_lang)})
        req = urllib.request.Request(
            self.url,
            data=body.encode("utf-8"),
            headers={"Content-Type": "application/json; charset=utf-8"},
            method="POST",
        )
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                raw = resp.read()
        except urllib.error.HTTPError as e:
            raise EngineRequestFailed(f"{self.url}: HTTP {e.code}") from None
        except (urllib.error.URLError, OSError) as e:
            raise EngineRequestFailed(f"{self.url}: {e}") from None
        try:
            doc = json.loads(raw.decode("utf-8"))
            out = doc["translations"]
        except (UnicodeDecodeError, ValueError, KeyError, TypeError):
            raise EngineRequestFailed(f"{self.url}: malformed response body") from None
        if not isinstance(out, list) or not all(isinstance(t, str) for t in out):
            raise EngineRequestFailed(f"{self.url}: translations must be a list of strings")
        return out


def make_engine(spec: str) -> EngineClient:
    """``mock``, ``mock:identity``, ``mock:cipher`` or an http(s) base URL."""
    if spec == "mock":
        return MockEngine("identity", engine_id="mock")
    if spec.startswith("mock:"):
        return MockEngine(spec.split(":", 1)[1], engine_id=spec)
    if spec.startswith(("http://", "https://")):
        return HttpEngine(spec)
    raise InvalidConfig(f"engine must be 'mock', 'mock:<mode>' or an http(s) URL, got {spec!r}")


# ---------------------------------------------------------------- translation


@dataclass(frozen=True)
class RetryPolicy:
    max_retries: int = 4
    base_delay: float = 0.5
    factor: float = 2.0
    max_delay: float = 8.0

    def delay(self, attempt: int) -> float:
        return min(self.max_delay, self.base_delay * self.factor**attempt)


def _call(engine, texts, src, tgt, retry: RetryPolicy, sleep) -> list[str]:
    for attempt in range(retry.max_retries + 1):
        try:
            out = engine.translate(texts, src, tgt)
        except EngineRequestFailed as e:
            if attempt == retry.max_retries:
                raise EngineUnavailable(
                    f"{engine.engine_id}: giving up after {attempt + 1} attempts: {e}"
                ) from e
            wait = retry.delay(attempt)
            log.warning("%s: %s; retrying in %.1fs", engine.engine_id, e, wait)
            sleep(wait)
            continue
        if len(out) != len(texts):
            raise ProtocolViolation(
                f"{engine.engine_id}: sent {len(texts)} texts, got {len(out)} translations"
            )
        return out
    raise AssertionError("unreachable")


def translate_batch(
    engine: EngineClient,
    lines: Sequence[str],
    src: LanguageTag,
    tgt: LanguageTag,
    batch_size: int = 32,
    max_in_flight: int = 4,
    retry: RetryPolicy = RetryPolicy(),
    sleep: Callable[[float], None] = time.sleep,
) -> list[str]:
    """Translate ``lines`` in batches, up to ``max_in_flight`` requests at once.

    Results come back in input order and are cleaned like any other text.
    """
    if batch_size < 1 or max_in_flight < 1:
        raise InvalidConfig("batch_size and max_in_flight must be >= 1")
    batches = [list(lines[i : i + batch_size]) for i in range(0, len(lines), batch_size)]
    if not batches:
        return []

    def run(batch):
        return _call(engine, batch, src, tgt, retry, sleep)

    if max_in_flight == 1 or len(batches) == 1:
        results = [run(b) for b in batches]
    else:
        pool = ThreadPoolExecutor(max_workers=min(max_in_flight, len(batches)))
        try:
            results = list(pool.map(run, batches))
        finally:
            pool.shutdown(wait=True, cancel_futures=True)
    return [clean_line(t) for batch in results for t in batch]


def build_synthetic(
    mono_lines: Sequence[str],
    translations: Sequence[str],
    mono_lang: LanguageTag,
    engine_lang: LanguageTag = ENGLISH,
) -> Corpus:
    """Pair machine translations (source side) with the authentic lines (target side)."""
    if len(mono_lines) != len(translations):
        raise LengthMismatch(len(mono_lines), len(translations), "monolingual lines and translations")
    pairs = [
        SentencePair(engine_lang, mono_lang, t, m, Origin.BackTranslated, SyntheticSide.SOURCE)
        for m, t in zip(mono_lines, translations)
    ]
    return Corpus.parallel(pairs, f"backtranslated:{mono_lang}", (engine_lang, mono_lang))


# ---------------------------------------------------------------- iteration


@dataclass(frozen=True)
class BtIterationRecord:
    iteration: int
    engine_id: str
    input_lines: int
    produced_pairs: int
    dropped_by_filter: int
    # half-open range of monolingual line indices translated in this iteration
    line_start: int
    line_end: int
    char_budget: int
    filter_drops: dict[str, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)


def bt_iterate(
    mono: Corpus,
    schedule: Sequence[tuple[BudgetSpec, str]],
    engines: Mapping[str, EngineClient],
    filter_cfg: FilterSettings | None = FilterSettings(),
    engine_lang: LanguageTag = ENGLISH,
    batch_size: int = 32,
    max_in_flight: int = 4,
    retry: RetryPolicy = RetryPolicy(),
    sleep: Callable[[float], None] = time.sleep,
) -> tuple[Corpus, list[BtIterationRecord]]:
    """Grow a synthetic corpus over a schedule of increasing budgets.

    Iteration k translates only the lines its budget adds on top of the
    previous one, so no line reaches an engine twice. ``filter_cfg=None``
    keeps every synthetic pair.
    """
    if mono.is_parallel:
        raise InvalidConfig("bt_iterate needs a monolingual corpus")
    if not schedule:
        raise InvalidConfig("back-translation schedule is empty")
    budgets = [b.char_budget for b, _ in schedule]
    if any(b2 <= b1 for b1, b2 in zip(budgets, budgets[1:])):
        raise InvalidConfig(f"schedule budgets must strictly increase, got {budgets}")
    missing = sorted({e for _, e in schedule} - set(engines))
    if missing:
        raise InvalidConfig(f"schedule names unknown engines: {', '.join(missing)}")

    done = 0
    parts: list[SentencePair] = []
    records = []
    for k, (budget, engine_id) in enumerate(schedule, 1):
        end = max(done, _budget_prefix(mono.lines, budget))
        new = mono.lines[done:end]
        out = translate_batch(
            engines[engine_id], new, mono.lang, engine_lang, batch_size, max_in_flight, retry, sleep
        )
        synthetic = build_synthetic(new, out, mono.lang, engine_lang)
        drops = {}
        if filter_cfg is not None:
            synthetic, rep = filter_cfg.apply(synthetic)
            drops = {"too_short": rep.too_short, "too_long": rep.too_long, "bad_ratio": rep.bad_ratio}
        parts.extend(synthetic.pairs)
        records.append(
            BtIterationRecord(
                iteration=k,
                engine_id=engine_id,
                input_lines=len(new),
                produced_pairs=len(synthetic),
                dropped_by_filter=len(new) - len(synthetic),
                line_start=done,
                line_end=end,
                char_budget=budget.char_budget,
                filter_drops=drops,
            )
        )
        log.info("bt iteration %d (%s): %d lines -> %d pairs", k, engine_id, len(new), len(synthetic))
        done = end
    corpus = Corpus.parallel(parts, f"{mono.provenance} | backtranslated", (engine_lang, mono.lang))
    return corpus, records


def write_audit_log(records: Sequence[BtIterationRecord], out: str | os.PathLike | IO[str]) -> None:
    if hasattr(out, "write"):
        for r in records:
            out.write(json.dumps(r.to_json(), sort_keys=True) + "\n")
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        write_audit_log(records, fh)
