"""Command-line entry point: ``lrmt <subcommand> ...``.

Exit codes: 0 success, 1 usage, 2 data error, 3 engine or network error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from lrmt import __version__
from lrmt.errors import DataError, EngineError, InvalidConfig, LrmtError, PipelineError

log = logging.getLogger("lrmt")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_ENGINE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 means bad data here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _open_out(path: str | None):
    if path in (None, "-"):
        return sys.stdout
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", encoding="utf-8", newline="\n")


def _write_corpus(corpus, path: str | None) -> None:
    from lrmt.corpus import write_jsonl

    fh = _open_out(path)
    try:
        write_jsonl(corpus, fh)
    finally:
        if fh is not sys.stdout:
            fh.close()


def _lang(text: str):
    from lrmt.langs import LanguageTag

    return LanguageTag.parse(text)


# ---------------------------------------------------------------- subcommands


def cmd_normalize(args) -> int:
    from lrmt.normalize import clean_lines

    if args.input in (None, "-"):
        raw = sys.stdin.buffer.read()
        name = "<stdin>"
    else:
        raw = Path(args.input).read_bytes()
        name = args.input
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        from lrmt.errors import Utf8Error

        raise Utf8Error(name, raw.count(b"\n", 0, e.start) + 1) from None
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    lines = [x[:-1] if x.endswith("\r") else x for x in lines]

    if args.check:
        dirty = [i for i, (a, b) in enumerate(zip(lines, clean_lines(lines, args.jobs)), 1) if a != b]
        for i in dirty[:20]:
            print(f"{name}:{i}: not clean", file=sys.stderr)
        if dirty:
            print(f"{len(dirty)} of {len(lines)} lines need cleaning", file=sys.stderr)
            return EXIT_DATA
        return EXIT_OK
    out = _open_out(args.out)
    try:
        out.writelines(x + "\n" for x in clean_lines(lines, args.jobs))
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_ingest(args) -> int:
    from lrmt.corpus import ingest_parallel, ingest_tsv

    src, tgt = _lang(args.source_lang), _lang(args.target_lang)
    if args.tsv:
        if args.source or args.target:
            raise InvalidConfig("give either --tsv or --source/--target, not both")
        corpus = ingest_tsv(args.tsv, src, tgt, args.origin, args.jobs)
    elif args.source and args.target:
        corpus = ingest_parallel(args.source, args.target, src, tgt, args.origin, args.jobs)
    else:
        raise InvalidConfig("ingest needs --source and --target, or --tsv")
    _write_corpus(corpus, args.out)
    log.info("ingested %d pairs", len(corpus))
    return EXIT_OK


def cmd_dedup(args) -> int:
    from lrmt.corpus import dedup, read_jsonl

    corpus, removed = dedup(read_jsonl(args.input))
    _write_corpus(corpus, args.out)
    log.info("kept %d pairs, removed %d duplicates", len(corpus), removed)
    return EXIT_OK


def cmd_filter(args) -> int:
    from lrmt.corpus import FilterSettings, read_jsonl

    settings = FilterSettings(args.min_chars, args.max_chars, args.max_len_ratio)
    corpus, rep = settings.apply(read_jsonl(args.input))
    _write_corpus(corpus, args.out)
    log.info(
        "kept %d of %d pairs (too short %d, too long %d, bad ratio %d)",
        rep.kept, rep.input_pairs, rep.too_short, rep.too_long, rep.bad_ratio,
    )
    return EXIT_OK


def cmd_merge(args) -> int:
    from lrmt.corpus import merge, read_jsonl

    corpus = merge([read_jsonl(p) for p in args.inputs])
    _write_corpus(corpus, args.out)
    return EXIT_OK


def cmd_split(args) -> int:
    from lrmt.corpus import read_jsonl, split

    train, dev = split(read_jsonl(args.input), args.dev_fraction, args.seed)
    _write_corpus(train, args.train)
    _write_corpus(dev, args.dev)
    log.info("train %d, dev %d", len(train), len(dev))
    return EXIT_OK


def cmd_stats(args) -> int:
    from lrmt.corpus import dedup, read_jsonl, stats

    corpora = [read_jsonl(p) for p in args.inputs]
    raw = stats(corpora)
    # duplicates are only meaningful within one direction, so dedup per input
    deduped = stats([dedup(c)[0] for c in corpora])
    if args.json:
        doc = {"raw": raw.to_json(), "deduplicated": deduped.to_json()}
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        sys.stdout.write(f"Raw\n{raw.to_table()}\nDeduplicated\n{deduped.to_table()}")
    return EXIT_OK


def _load_schedule(path: str) -> list[tuple[int, str]]:
    from lrmt.pipeline import config_from_dict, tomllib

    with open(path, "rb") as fh:
        try:
            raw = tomllib.load(fh)
        except tomllib.TOMLDecodeError as e:
            raise InvalidConfig(f"{path}: {e}") from None
    # reuse the config validator on a throwaway document
    doc = {
        "language": "asm",
        "sources": [{"source": "-", "target": "-"}],
        "backtranslate": {"mono": "-", "schedule": raw.get("schedule")},
    }
    return list(config_from_dict(doc).backtranslate.schedule)


def cmd_backtranslate(args) -> int:
    from lrmt.backtranslate import BudgetSpec, bt_iterate, make_engine, write_audit_log
    from lrmt.corpus import FilterSettings, ingest_monolingual

    if (args.budget is None) == (args.schedule is None):
        raise InvalidConfig("give exactly one of --budget or --schedule")
    if args.schedule:
        schedule = _load_schedule(args.schedule)
    else:
        schedule = [(args.budget, args.engine)]
    mono = ingest_monolingual(args.mono, _lang(args.mono_lang), args.jobs)
    engines = {spec: make_engine(spec) for _, spec in schedule}
    corpus, records = bt_iterate(
        mono,
        [(BudgetSpec(b), e) for b, e in schedule],
        engines,
        filter_cfg=None if args.no_filter else FilterSettings(),
        batch_size=args.batch_size,
        max_in_flight=args.max_in_flight,
    )
    _write_corpus(corpus, args.out)
    audit = args.audit or (None if args.out in (None, "-") else str(Path(args.out).with_suffix(".audit.jsonl")))
    if audit:
        write_audit_log(records, audit)
    log.info("wrote %d synthetic pairs over %d iterations", len(corpus), len(records))
    return EXIT_OK


def cmd_manifest(args) -> int:
    from lrmt.manifest import canonical_json, emit_training_manifest, parse_override, validate_manifest

    if args.validate:
        problems = validate_manifest(Path(args.validate).read_bytes())
        for p in problems:
            print(p)
        return EXIT_DATA if problems else EXIT_OK
    langs = [_lang(x) for x in args.languages.split(",") if x.strip()]
    overrides = dict(parse_override(s) for s in args.set)
    doc = emit_training_manifest(langs, overrides)
    out = _open_out(args.out)
    try:
        out.write(canonical_json(doc))
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_eval(args) -> int:
    from lrmt.corpus import read_text_lines
    from lrmt.metrics import evaluate_all
    from lrmt.report import emit_eval_report

    hyps, refs = read_text_lines(args.hyp), read_text_lines(args.ref)
    direction = (_lang(args.src_lang), _lang(args.tgt_lang))
    report = evaluate_all(hyps, refs, direction, lowercase=args.lowercase, test_set=args.test_set)
    text, rows = emit_eval_report([report], trim=args.trim)
    sys.stdout.write(text)
    doc = json.dumps(rows[0], sort_keys=True, ensure_ascii=False)
    out = _open_out(args.json)
    out.write(doc + "\n")
    if out is not sys.stdout:
        out.close()
    return EXIT_OK


def cmd_run(args) -> int:
    from lrmt.pipeline import load_config, run_pipeline

    if not args.config:
        raise InvalidConfig("run needs --config FILE")
    cfg = load_config(args.config, seed=args.seed, output_dir=args.out)
    report = run_pipeline(cfg, jobs=args.jobs)
    stages = report.stages
    log.info(
        "config %s: ingested %d, deduped %d, filtered %d, back-translated %d, final %d",
        report.config_hash[:12],
        stages["ingest"]["output"],
        stages["dedup"]["output"],
        stages["filter"]["output"],
        stages["backtranslate"]["output"],
        stages["merge"]["output"],
    )
    print(cfg.resolve(cfg.output_dir))
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _global_flags() -> argparse.ArgumentParser:
    # defaults are suppressed so the flags work before or after the subcommand
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", default=argparse.SUPPRESS, help="pipeline config (TOML)")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for every random step")
    p.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes for cleaning")
    p.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS, help="only print warnings")
    return p


_GLOBAL_DEFAULTS = {"config": None, "seed": None, "jobs": 1, "quiet": False}


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = _Parser(prog="lrmt", description="Corpus and evaluation toolkit for low-resource MT.", parents=[common])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name, func, help):
        p = sub.add_parser(name, help=help, description=help, parents=[common])
        p.set_defaults(func=func)
        return p

    p = add("normalize", cmd_normalize, "clean text lines (stdin or file) to stdout")
    p.add_argument("input", nargs="?", help="input file (default: stdin)")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--check", action="store_true", help="exit 2 if any line is not already clean")

    p = add("ingest", cmd_ingest, "read a parallel corpus into canonical JSONL")
    p.add_argument("--source", help="source-side line file")
    p.add_argument("--target", help="target-side line file")
    p.add_argument("--tsv", help="two-column TSV instead of two line files")
    p.add_argument("--source-lang", default="eng_Latn")
    p.add_argument("--target-lang", required=True)
    p.add_argument("--origin", default="Other", help="WMT, BPCC, PMIndia, OLD, BackTranslated or Other")
    p.add_argument("--out", help="output JSONL (default: stdout)")

    p = add("dedup", cmd_dedup, "drop exact duplicate pairs, keeping first occurrences")
    p.add_argument("input")
    p.add_argument("--out")

    p = add("filter", cmd_filter, "drop pairs by length and length ratio")
    p.add_argument("input")
    p.add_argument("--out")
    p.add_argument("--min-chars", type=int, default=1)
    p.add_argument("--max-chars", type=int, default=2000)
    p.add_argument("--max-len-ratio", default="3", help="longer/shorter side, in characters")

    p = add("merge", cmd_merge, "concatenate corpora of the same direction")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--out")

    p = add("split", cmd_split, "seeded train/dev split")
    p.add_argument("input")
    p.add_argument("--dev-fraction", required=True)
    p.add_argument("--train", required=True)
    p.add_argument("--dev", required=True)

    p = add("stats", cmd_stats, "per-origin pair counts, raw and deduplicated")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--json", action="store_true", help="machine-readable output")

    p = add("backtranslate", cmd_backtranslate, "translate monolingual text into synthetic pairs")
    p.add_argument("--mono", required=True)
    p.add_argument("--mono-lang", required=True)
    p.add_argument("--engine", default="mock", help="mock, mock:cipher or an http(s) URL")
    p.add_argument("--budget", type=int, help="character budget for a single iteration")
    p.add_argument("--schedule", help="TOML file with schedule = [{budget, engine}, ...]")
    p.add_argument("--out")
    p.add_argument("--audit", help="audit log (default: next to --out)")
    p.add_argument("--no-filter", action="store_true", help="keep every synthetic pair")
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--max-in-flight", type=int, default=4)

    p = add("manifest", cmd_manifest, "emit or validate a training manifest")
    p.add_argument("--languages", default="asm,mni,kha,lus")
    p.add_argument("--set", action="append", default=[], metavar="PATH=VALUE", help="override a field")
    p.add_argument("--out")
    p.add_argument("--validate", metavar="FILE", help="check an existing manifest instead")

    p = add("eval", cmd_eval, "score a hypothesis file against a reference file")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--src-lang", required=True)
    p.add_argument("--tgt-lang", required=True)
    p.add_argument("--lowercase", action="store_true")
    p.add_argument("--test-set")
    p.add_argument("--trim", action="store_true", help="drop trailing zeros in the table")
    p.add_argument("--json", help="write the JSON row here (default: stdout, after the table)")

    p = add("run", cmd_run, "run the full pipeline from --config")
    p.add_argument("--out", help="override output_dir")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for k, v in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    if args.jobs < 1:
        parser.error("--jobs must be >= 1")
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except PipelineError as e:
        print(f"lrmt: {e}", file=sys.stderr)
        return EXIT_ENGINE if isinstance(e.cause, EngineError) else EXIT_DATA
    except EngineError as e:
        print(f"lrmt: engine error: {e}", file=sys.stderr)
        return EXIT_ENGINE
    except (DataError, LrmtError) as e:
        print(f"lrmt: {e}", file=sys.stderr)
        return EXIT_DATA
    except BrokenPipeError:
        return EXIT_OK
    except OSError as e:
        print(f"lrmt: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
