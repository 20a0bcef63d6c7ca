import json

import pytest

import fixtures as fx
from lrmt.backtranslate import RetryPolicy
from lrmt.cli import main


@pytest.fixture
def corpus_dir(tmp_path):
    fx.write_parallel(tmp_path, "wmt", "asm", 30)
    fx.write_tsv(tmp_path, "bpcc", "asm", 20)
    return tmp_path


def run(capsys, *argv):
    code = main(list(map(str, argv)))
    out, err = capsys.readouterr()
    return code, out, err


def test_normalize_file_and_check(tmp_path, capsys):
    src = tmp_path / "in.txt"
    src.write_text("\u201cHi\u201d  there\u200b!\nok\n", encoding="utf-8")
    code, out, _ = run(capsys, "normalize", src)
    assert code == 0 and out == '"Hi" there!\nok\n'
    assert run(capsys, "normalize", "--check", src)[0] == 2
    clean = tmp_path / "clean.txt"
    clean.write_text(out, encoding="utf-8")
    assert run(capsys, "normalize", "--check", clean)[0] == 0


def test_normalize_stdin(monkeypatch, capsys):
    import io
    import sys

    monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO("a b\r\n".encode())))
    code, out, _ = run(capsys, "normalize")
    assert code == 0 and out == "a b\n"


def test_normalize_bad_utf8(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    p.write_bytes(b"ok\n\xff\n")
    code, _, err = run(capsys, "normalize", p)
    assert code == 2 and ":2:" in err


def test_ingest_dedup_filter_merge_split_stats(corpus_dir, capsys):
    d = corpus_dir
    assert run(capsys, "ingest", "--source", d / "wmt.en", "--target", d / "wmt.asm",
               "--target-lang", "asm", "--origin", "WMT", "--out", d / "a.jsonl")[0] == 0
    assert run(capsys, "ingest", "--tsv", d / "bpcc.tsv", "--target-lang", "asm_Beng",
               "--origin", "BPCC", "--out", d / "b.jsonl")[0] == 0
    assert run(capsys, "merge", d / "a.jsonl", d / "b.jsonl", d / "a.jsonl", "--out", d / "m.jsonl")[0] == 0
    assert len((d / "m.jsonl").read_text().splitlines()) == 80
    assert run(capsys, "dedup", d / "m.jsonl", "--out", d / "u.jsonl")[0] == 0
    assert len((d / "u.jsonl").read_text().splitlines()) == 50
    assert run(capsys, "filter", d / "u.jsonl", "--max-len-ratio", "100", "--out", d / "f.jsonl")[0] == 0
    assert (d / "f.jsonl").read_bytes() == (d / "u.jsonl").read_bytes()
    assert run(capsys, "--seed", 3, "split", d / "f.jsonl", "--dev-fraction", "0.2",
               "--train", d / "t.jsonl", "--dev", d / "d.jsonl")[0] == 0
    assert len((d / "d.jsonl").read_text().splitlines()) == 10

    code, out, _ = run(capsys, "stats", d / "m.jsonl", "--json")
    doc = json.loads(out)
    assert doc["raw"]["languages"]["asm_Beng"]["origins"] == {
        "WMT": 60, "BPCC": 20, "PMIndia": 0, "OLD": 0, "BackTranslated": 0, "Other": 0,
    }
    assert doc["deduplicated"]["total"] == 50
    code, out, _ = run(capsys, "stats", d / "m.jsonl")
    assert "Assamese" in out and "Back-Translated" in out and "80" in out


def test_ingest_errors(corpus_dir, capsys):
    d = corpus_dir
    (d / "short.asm").write_text("ক\n", encoding="utf-8")
    code, _, err = run(capsys, "ingest", "--source", d / "wmt.en", "--target", d / "short.asm", "--target-lang", "asm")
    assert code == 2 and "line count mismatch" in err
    assert run(capsys, "ingest", "--source", d / "wmt.en", "--target-lang", "asm")[0] == 2
    assert run(capsys, "ingest", "--tsv", d / "missing.tsv", "--target-lang", "asm")[0] == 2


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        main(["split", "x"])
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        main(["--jobs", "0", "stats", "x"])
    assert e.value.code == 1


def test_manifest_cli(tmp_path, capsys):
    out = tmp_path / "m.json"
    assert run(capsys, "manifest", "--out", out)[0] == 0
    golden = (fx.Path(__file__).parent / "data" / "manifest_default.json").read_bytes()
    assert out.read_bytes() == golden
    assert run(capsys, "manifest", "--validate", out)[0] == 0
    code, text, _ = run(capsys, "manifest", "--languages", "kha", "--set", "epochs=2", "--set", "adapter.rank=32")
    doc = json.loads(text)
    assert doc["adapter"]["rank"] == 32 and doc["languages"] == ["kha_Latn"]
    assert run(capsys, "manifest", "--set", "adapter.rank=0")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({**doc, "inference": {"num_beams": 0, "repetition_penalty": 2.5}}))
    code, text, _ = run(capsys, "manifest", "--validate", bad)
    assert code == 2 and text.count("\n") == 1


def test_eval_cli(tmp_path, capsys):
    hyp = tmp_path / "hyp.txt"
    ref = tmp_path / "ref.txt"
    hyp.write_text("the cat sat on the mat\nhello world\n", encoding="utf-8")
    ref.write_text("the cat sat on the mat\nhello world\n", encoding="utf-8")
    code, out, _ = run(capsys, "eval", "--hyp", hyp, "--ref", ref, "--src-lang", "asm", "--tgt-lang", "eng")
    lines = out.splitlines()
    assert code == 0
    assert lines[2].split()[:5] == ["English-Assamese", "as_to_en", "100.00", "0.00", "1.0000"]
    doc = json.loads(lines[3])
    assert doc["bleu"] == pytest.approx(100) and doc["n_segments"] == 2 and "aux" in doc
    ref.write_text("one line\n", encoding="utf-8")
    assert run(capsys, "eval", "--hyp", hyp, "--ref", ref, "--src-lang", "asm", "--tgt-lang", "eng")[0] == 2


def test_backtranslate_cli(tmp_path, capsys):
    mono = fx.write_mono(tmp_path, "mono", "lus", 40)
    out = tmp_path / "bt.jsonl"
    code, _, _ = run(capsys, "backtranslate", "--mono", mono, "--mono-lang", "lus_Latn", "--engine", "mock",
                     "--budget", 300, "--out", out, "--no-filter")
    assert code == 0
    rows = [json.loads(x) for x in out.read_text().splitlines()]
    assert rows and all(r["origin"] == "BackTranslated" and r["synthetic_side"] == "source" for r in rows)
    audit = [json.loads(x) for x in (tmp_path / "bt.audit.jsonl").read_text().splitlines()]
    assert audit[0]["produced_pairs"] == len(rows)

    sched = tmp_path / "sched.toml"
    sched.write_text('schedule = [{budget = 300, engine = "mock"}, {budget = 900, engine = "mock:cipher"}]\n')
    code, _, _ = run(capsys, "backtranslate", "--mono", mono, "--mono-lang", "lus", "--schedule", sched,
                     "--out", out, "--audit", tmp_path / "audit.jsonl")
    audit = [json.loads(x) for x in (tmp_path / "audit.jsonl").read_text().splitlines()]
    assert code == 0 and audit[0]["line_end"] == audit[1]["line_start"]
    assert run(capsys, "backtranslate", "--mono", mono, "--mono-lang", "lus", "--out", out)[0] == 2


def test_backtranslate_engine_down(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr(RetryPolicy, "delay", lambda self, attempt: 0.0)
    mono = fx.write_mono(tmp_path, "mono", "lus", 3)
    code, _, err = run(capsys, "backtranslate", "--mono", mono, "--mono-lang", "lus",
                       "--engine", "http://127.0.0.1:9", "--budget", 1000, "--out", tmp_path / "x.jsonl")
    assert code == 3 and "engine" in err


def test_run_cli(corpus_dir, capsys, monkeypatch):
    monkeypatch.setattr(RetryPolicy, "delay", lambda self, attempt: 0.0)
    body = """
language = "asm"
[[sources]]
origin = "WMT"
source = "wmt.en"
target = "wmt.asm"
"""
    cfg = fx.write_config(corpus_dir, body)
    code, out, _ = run(capsys, "--quiet", "run", "--config", cfg, "--out", "o1")
    assert code == 0 and out.strip().endswith("o1")
    assert (corpus_dir / "o1" / "run_report.json").exists()
    assert run(capsys, "run", "--jobs", 2, "--config", cfg, "--out", "o2")[0] == 0
    assert (corpus_dir / "o1" / "corpus.jsonl").read_bytes() == (corpus_dir / "o2" / "corpus.jsonl").read_bytes()
    assert run(capsys, "run")[0] == 2

    cfg.write_text(body + '[backtranslate]\nmono = "wmt.asm"\nschedule = [{budget = 99, engine = "http://127.0.0.1:9"}]\n')
    code, _, err = run(capsys, "run", "--config", cfg)
    assert code == 3 and "backtranslate" in err
