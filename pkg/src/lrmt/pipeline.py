"""Config-driven end-to-end corpus runs.

A run ingests every configured source, orients it English -> language,
deduplicates and filters the authentic pairs, optionally grows the corpus
by back-translation, merges, counts, splits and writes:

    corpus.jsonl        all surviving pairs
    train.jsonl/dev.jsonl  only when split.dev_fraction > 0
    manifest.json       training manifest
    stats.json/.txt     per-origin counts, raw and final
    bt_audit.jsonl      one record per back-translation iteration
    run_report.json     stage counts, config hash, output digests
    timings.json        wall-clock per stage (the only non-deterministic file)

Config example (paths are relative to the config file)::

    language = "asm_Beng"
    seed = 13
    output_dir = "out"

    [[sources]]
    origin = "WMT"
    source = "wmt.en"
    target = "wmt.as"

    [[sources]]
    origin = "BPCC"
    format = "tsv"
    path = "bpcc.tsv"

    [filter]
    max_len_ratio = "3"

    [backtranslate]
    mono = "mono.as"
    schedule = [{budget = 500000, engine = "mock"}]

    [split]
    dev_fraction = "0.01"
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import shutil
import sys
import time
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from lrmt.backtranslate import BudgetSpec, EngineClient, RetryPolicy, bt_iterate, make_engine, write_audit_log
from lrmt.corpus import (
    Corpus,
    FilterSettings,
    Origin,
    dedup,
    flip,
    ingest_monolingual,
    ingest_parallel,
    ingest_tsv,
    merge,
    split,
    stats,
    write_jsonl,
)
from lrmt.errors import InvalidConfig, LrmtError, PipelineError
from lrmt.langs import ENGLISH, LanguageTag
from lrmt.manifest import canonical_json, emit_training_manifest

log = logging.getLogger(__name__)

__all__ = ["SourceSpec", "BtSpec", "PipelineConfig", "RunReport", "load_config", "run_pipeline"]

FORMATS = ("parallel", "tsv")


@dataclass(frozen=True)
class SourceSpec:
    origin: Origin
    format: str
    paths: tuple[str, ...]
    source_lang: LanguageTag
    target_lang: LanguageTag

    def canonical(self) -> dict[str, Any]:
        return {
            "origin": self.origin.value,
            "format": self.format,
            "paths": list(self.paths),
            "source_lang": str(self.source_lang),
            "target_lang": str(self.target_lang),
        }


@dataclass(frozen=True)
class BtSpec:
    mono: str
    schedule: tuple[tuple[int, str], ...]
    batch_size: int = 32
    max_in_flight: int = 4
    max_retries: int = 4

    def canonical(self) -> dict[str, Any]:
        return {
            "mono": self.mono,
            "schedule": [{"budget": b, "engine": e} for b, e in self.schedule],
            "batch_size": self.batch_size,
            "max_in_flight": self.max_in_flight,
            "max_retries": self.max_retries,
        }


@dataclass(frozen=True)
class PipelineConfig:
    language: LanguageTag
    sources: tuple[SourceSpec, ...]
    output_dir: str
    seed: int = 0
    filter: FilterSettings | None = FilterSettings()
    backtranslate: BtSpec | None = None
    dev_fraction: Fraction = Fraction(0)
    manifest_languages: tuple[LanguageTag, ...] = ()
    manifest_overrides: tuple[tuple[str, Any], ...] = ()
    # directory relative paths are resolved against; not part of the hash
    base_dir: str = "."

    def __post_init__(self):
        if self.language == ENGLISH:
            raise InvalidConfig("language must be the non-English side")
        if not self.sources:
            raise InvalidConfig("at least one source is required")
        if not 0 <= self.dev_fraction < 1:
            raise InvalidConfig("split.dev_fraction must be in [0, 1)")

    def resolve(self, path: str) -> Path:
        return Path(self.base_dir, path)

    def canonical(self) -> dict[str, Any]:
        # where outputs go does not change what they contain, so output_dir
        # (like base_dir) stays out of the hash
        return {
            "language": str(self.language),
            "seed": self.seed,
            "sources": [s.canonical() for s in self.sources],
            "filter": None if self.filter is None else self.filter.to_json(),
            "backtranslate": None if self.backtranslate is None else self.backtranslate.canonical(),
            "split": {"dev_fraction": str(self.dev_fraction)},
            "manifest": {
                "languages": [str(x) for x in self.manifest_languages],
                "overrides": {k: v for k, v in self.manifest_overrides},
            },
        }

    @property
    def config_hash(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------- config parsing


_TOP_KEYS = {"language", "seed", "output_dir", "sources", "filter", "backtranslate", "split", "manifest"}


def _expect(table: Mapping, allowed: set[str], where: str) -> None:
    unknown = sorted(set(table) - allowed)
    if unknown:
        raise InvalidConfig(f"{where}: unknown keys {', '.join(unknown)}")


def _int(value, where: str, minimum: int | None = None) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise InvalidConfig(f"{where} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise InvalidConfig(f"{where} must be >= {minimum}, got {value}")
    return value


def _fraction(value, where: str) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise InvalidConfig(f"{where} must be a number or fraction string, got {value!r}") from None


def _lang(value, where: str) -> LanguageTag:
    if not isinstance(value, str):
        raise InvalidConfig(f"{where} must be a language tag string")
    return LanguageTag.parse(value)


def _source(raw: Mapping, i: int, language: LanguageTag) -> SourceSpec:
    where = f"sources[{i}]"
    _expect(raw, {"origin", "format", "source", "target", "path", "source_lang", "target_lang"}, where)
    try:
        origin = Origin(raw.get("origin", "Other"))
    except ValueError:
        raise InvalidConfig(f"{where}.origin must be one of {', '.join(o.value for o in Origin)}") from None
    fmt = raw.get("format", "parallel")
    if fmt not in FORMATS:
        raise InvalidConfig(f"{where}.format must be one of {', '.join(FORMATS)}")
    if fmt == "parallel":
        if "source" not in raw or "target" not in raw or "path" in raw:
            raise InvalidConfig(f"{where}: parallel sources need 'source' and 'target' files")
        paths = (raw["source"], raw["target"])
    else:
        if "path" not in raw or "source" in raw or "target" in raw:
            raise InvalidConfig(f"{where}: tsv sources need a single 'path'")
        paths = (raw["path"],)
    if not all(isinstance(p, str) and p for p in paths):
        raise InvalidConfig(f"{where}: file names must be non-empty strings")
    src = _lang(raw.get("source_lang", str(ENGLISH)), f"{where}.source_lang")
    tgt = _lang(raw.get("target_lang", str(language)), f"{where}.target_lang")
    if {src, tgt} != {ENGLISH, language}:
        raise InvalidConfig(f"{where}: languages must be {ENGLISH} and {language}, got {src} and {tgt}")
    return SourceSpec(origin, fmt, paths, src, tgt)


def config_from_dict(raw: Mapping[str, Any], base_dir: str = ".") -> PipelineConfig:
    _expect(raw, _TOP_KEYS, "config")
    if "language" not in raw:
        raise InvalidConfig("config: 'language' is required")
    language = _lang(raw["language"], "language")
    seed = _int(raw.get("seed", 0), "seed")
    output_dir = raw.get("output_dir", "out")
    if not isinstance(output_dir, str) or not output_dir:
        raise InvalidConfig("output_dir must be a non-empty string")
    sources = raw.get("sources", [])
    if not isinstance(sources, list) or not all(isinstance(s, dict) for s in sources):
        raise InvalidConfig("sources must be an array of tables")

    filt: FilterSettings | None = FilterSettings()
    if "filter" in raw:
        f = raw["filter"]
        _expect(f, {"enabled", "min_chars", "max_chars", "max_len_ratio"}, "filter")
        if f.get("enabled", True):
            filt = FilterSettings(
                _int(f.get("min_chars", 1), "filter.min_chars", 0),
                _int(f.get("max_chars", 2000), "filter.max_chars", 0),
                _fraction(f.get("max_len_ratio", 3), "filter.max_len_ratio"),
            )
        else:
            filt = None

    bt = None
    if "backtranslate" in raw:
        b = raw["backtranslate"]
        _expect(b, {"mono", "schedule", "batch_size", "max_in_flight", "max_retries"}, "backtranslate")
        if not isinstance(b.get("mono"), str):
            raise InvalidConfig("backtranslate.mono must name a file")
        sched = b.get("schedule")
        if not isinstance(sched, list) or not sched:
            raise InvalidConfig("backtranslate.schedule must be a non-empty array")
        steps = []
        for j, step in enumerate(sched):
            if not isinstance(step, dict):
                raise InvalidConfig(f"backtranslate.schedule[{j}] must be a table")
            _expect(step, {"budget", "engine"}, f"backtranslate.schedule[{j}]")
            engine = step.get("engine", "mock")
            if not isinstance(engine, str):
                raise InvalidConfig(f"backtranslate.schedule[{j}].engine must be a string")
            steps.append((_int(step.get("budget"), f"backtranslate.schedule[{j}].budget", 1), engine))
        bt = BtSpec(
            b["mono"],
            tuple(steps),
            _int(b.get("batch_size", 32), "backtranslate.batch_size", 1),
            _int(b.get("max_in_flight", 4), "backtranslate.max_in_flight", 1),
            _int(b.get("max_retries", 4), "backtranslate.max_retries", 0),
        )

    dev_fraction = Fraction(0)
    if "split" in raw:
        _expect(raw["split"], {"dev_fraction"}, "split")
        dev_fraction = _fraction(raw["split"].get("dev_fraction", 0), "split.dev_fraction")

    m_langs: tuple[LanguageTag, ...] = ()
    m_over: tuple[tuple[str, Any], ...] = ()
    if "manifest" in raw:
        m = raw["manifest"]
        _expect(m, {"languages", "overrides"}, "manifest")
        m_langs = tuple(_lang(x, "manifest.languages") for x in m.get("languages", []))
        over = m.get("overrides", {})
        if not isinstance(over, dict):
            raise InvalidConfig("manifest.overrides must be a table")
        m_over = tuple(sorted(_flatten(over).items()))

    return PipelineConfig(
        language=language,
        sources=tuple(_source(s, i, language) for i, s in enumerate(sources)),
        output_dir=output_dir,
        seed=seed,
        filter=filt,
        backtranslate=bt,
        dev_fraction=dev_fraction,
        manifest_languages=m_langs,
        manifest_overrides=m_over,
        base_dir=base_dir,
    )


def _flatten(table: Mapping, prefix: str = "") -> dict[str, Any]:
    # nested TOML tables become dotted override paths
    out = {}
    for k, v in table.items():
        path = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, path + "."))
        else:
            out[path] = v
    return out


def load_config(path: str | os.PathLike, seed: int | None = None, output_dir: str | None = None) -> PipelineConfig:
    """Read a TOML config; ``seed`` and ``output_dir`` override the file."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as e:
        raise InvalidConfig(f"{path}: {e}") from None
    if seed is not None:
        raw["seed"] = seed
    if output_dir is not None:
        raw["output_dir"] = output_dir
    return config_from_dict(raw, base_dir=str(Path(path).parent))


# ---------------------------------------------------------------- running


@dataclass
class RunReport:
    config_hash: str
    language: str
    stages: dict[str, Any] = field(default_factory=dict)
    breakdown_ingested: dict[str, Any] = field(default_factory=dict)
    breakdown_deduplicated: dict[str, Any] = field(default_factory=dict)
    breakdown_final: dict[str, Any] = field(default_factory=dict)
    outputs: dict[str, str] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        # timings are kept out so the report is reproducible byte for byte
        return {
            "config_hash": self.config_hash,
            "language": self.language,
            "stages": self.stages,
            "breakdown_ingested": self.breakdown_ingested,
            "breakdown_deduplicated": self.breakdown_deduplicated,
            "breakdown_final": self.breakdown_final,
            "outputs": self.outputs,
        }


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_json(path: Path, doc: Any) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n")


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


class _Run:
    """Mutable state of one run, so a failure can quarantine what exists."""

    def __init__(self, config: PipelineConfig, jobs: int, engines: Mapping[str, EngineClient] | None):
        self.cfg = config
        self.jobs = jobs
        self.engines = engines
        self.out = config.resolve(config.output_dir)
        self.report = RunReport(config.config_hash, str(config.language))
        self.latest: Corpus | None = None
        self.stage = "setup"
        self.tables = {}

    def timed(self, name, fn, *args):
        self.stage = name
        t0 = time.perf_counter()
        result = fn(*args)
        self.report.timings[name] = round(time.perf_counter() - t0, 6)
        return result

    # -- stages

    def ingest(self) -> list[Corpus]:
        direction = (ENGLISH, self.cfg.language)
        corpora, rows = [], []
        for spec in self.cfg.sources:
            paths = [self.cfg.resolve(p) for p in spec.paths]
            if spec.format == "parallel":
                c = ingest_parallel(paths[0], paths[1], spec.source_lang, spec.target_lang, spec.origin, self.jobs)
            else:
                c = ingest_tsv(paths[0], spec.source_lang, spec.target_lang, spec.origin, self.jobs)
            if c.direction != direction:
                c = flip(c)
            corpora.append(c)
            rows.append({**spec.canonical(), "pairs": len(c)})
            log.info("ingested %d pairs from %s", len(c), ", ".join(spec.paths))
        self.report.stages["ingest"] = {"sources": rows, "output": sum(len(c) for c in corpora)}
        self.tables["Ingested"] = stats(corpora)
        self.report.breakdown_ingested = self.tables["Ingested"].to_json()
        return corpora

    def dedup(self, corpora: list[Corpus]) -> Corpus:
        merged = merge(corpora)
        self.latest = merged
        out, removed = dedup(merged)
        self.report.stages["dedup"] = {"input": len(merged), "removed": removed, "output": len(out)}
        self.tables["Deduplicated"] = stats([out])
        self.report.breakdown_deduplicated = self.tables["Deduplicated"].to_json()
        return out

    def filter(self, corpus: Corpus) -> Corpus:
        if self.cfg.filter is None:
            self.report.stages["filter"] = {"enabled": False, "input": len(corpus), "output": len(corpus)}
            return corpus
        out, rep = self.cfg.filter.apply(corpus)
        self.report.stages["filter"] = {
            "enabled": True,
            "settings": self.cfg.filter.to_json(),
            "input": rep.input_pairs,
            "too_short": rep.too_short,
            "too_long": rep.too_long,
            "bad_ratio": rep.bad_ratio,
            "output": rep.kept,
        }
        return out

    def backtranslate(self) -> tuple[Corpus | None, list]:
        bt = self.cfg.backtranslate
        if bt is None:
            self.report.stages["backtranslate"] = {"enabled": False, "output": 0}
            return None, []
        mono = ingest_monolingual(self.cfg.resolve(bt.mono), self.cfg.language, self.jobs)
        engines = dict(self.engines or {})
        for _, spec in bt.schedule:
            if spec not in engines:
                engines[spec] = make_engine(spec)
        corpus, records = bt_iterate(
            mono,
            [(BudgetSpec(b), e) for b, e in bt.schedule],
            engines,
            filter_cfg=self.cfg.filter,
            batch_size=bt.batch_size,
            max_in_flight=bt.max_in_flight,
            retry=RetryPolicy(max_retries=bt.max_retries),
        )
        self.report.stages["backtranslate"] = {
            "enabled": True,
            "mono_lines": len(mono),
            "iterations": [r.to_json() for r in records],
            "output": len(corpus),
        }
        return corpus, records

    def merge(self, authentic: Corpus, synthetic: Corpus | None) -> Corpus:
        parts = [authentic] if synthetic is None else [authentic, synthetic]
        out = merge(parts)
        self.report.stages["merge"] = {"input": sum(len(c) for c in parts), "output": len(out)}
        return out

    def split(self, corpus: Corpus):
        if self.cfg.dev_fraction == 0:
            self.report.stages["split"] = {"dev_fraction": "0", "train": len(corpus), "dev": 0}
            return None
        train, dev = split(corpus, self.cfg.dev_fraction, self.cfg.seed)
        self.report.stages["split"] = {
            "dev_fraction": str(self.cfg.dev_fraction),
            "seed": self.cfg.seed,
            "train": len(train),
            "dev": len(dev),
        }
        return train, dev

    def write(self, final: Corpus, parts, records) -> None:
        self.out.mkdir(parents=True, exist_ok=True)
        written = ["corpus.jsonl"]
        write_jsonl(final, self.out / "corpus.jsonl")
        if parts is not None:
            write_jsonl(parts[0], self.out / "train.jsonl")
            write_jsonl(parts[1], self.out / "dev.jsonl")
            written += ["train.jsonl", "dev.jsonl"]
        langs = self.cfg.manifest_languages or (self.cfg.language,)
        doc = emit_training_manifest(list(langs), dict(self.cfg.manifest_overrides))
        _write_text(self.out / "manifest.json", canonical_json(doc))
        breakdown = stats([final])
        _write_json(
            self.out / "stats.json",
            {
                "config_hash": self.report.config_hash,
                "ingested": self.report.breakdown_ingested,
                "deduplicated": self.report.breakdown_deduplicated,
                "final": breakdown.to_json(),
            },
        )
        self.tables["Final"] = breakdown
        body = "\n".join(f"{title}\n{table.to_table()}" for title, table in self.tables.items())
        _write_text(self.out / "stats.txt", f"# config {self.report.config_hash}\n\n{body}")
        written += ["manifest.json", "stats.json", "stats.txt"]
        if self.cfg.backtranslate is not None:
            write_audit_log(records, self.out / "bt_audit.jsonl")
            written.append("bt_audit.jsonl")
        self.report.breakdown_final = breakdown.to_json()
        self.report.outputs = {name: _sha256(self.out / name) for name in sorted(written)}
        _write_json(self.out / "run_report.json", self.report.to_json())

    def quarantine(self, error: BaseException) -> Path:
        qdir = self.out / "quarantine"
        qdir.mkdir(parents=True, exist_ok=True)
        if self.latest is not None and self.latest.is_parallel:
            write_jsonl(self.latest, qdir / "partial_corpus.jsonl")
        _write_json(
            qdir / "partial_report.json",
            {
                "failed_stage": self.stage,
                "error": f"{type(error).__name__}: {error}",
                **self.report.to_json(),
            },
        )
        return qdir


def run_pipeline(
    config: PipelineConfig,
    jobs: int = 1,
    engines: Mapping[str, EngineClient] | None = None,
) -> RunReport:
    """Run every stage; on failure write a quarantine directory and raise PipelineError."""
    run = _Run(config, jobs, engines)
    stale = run.out / "quarantine"
    if stale.is_dir():
        shutil.rmtree(stale)
    try:
        corpora = run.timed("ingest", run.ingest)
        authentic = run.timed("dedup", run.dedup, corpora)
        run.latest = authentic
        authentic = run.timed("filter", run.filter, authentic)
        run.latest = authentic
        synthetic, records = run.timed("backtranslate", run.backtranslate)
        final = run.timed("merge", run.merge, authentic, synthetic)
        run.latest = final
        parts = run.timed("split", run.split, final)
        run.timed("write", run.write, final, parts, records)
    except (LrmtError, OSError) as e:
        qdir = run.quarantine(e)
        log.error("stage %s failed; partial outputs in %s", run.stage, qdir)
        raise PipelineError(run.stage, e) from e
    _write_json(run.out / "timings.json", run.report.timings)
    return run.report
