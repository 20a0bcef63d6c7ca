import pytest

from lrmt.errors import EmptyInput
from lrmt.langs import ENGLISH, LanguageTag
from lrmt.metrics import MetricReport, evaluate_all
from lrmt.report import COLUMNS, emit_eval_report, format_score

ASM = LanguageTag.parse("asm")
KHA = LanguageTag.parse("kha")


def report(direction=(ENGLISH, ASM), **scores):
    base = dict(bleu=27.26, ter=52.79, ribes=0.3032, meteor=0.513, chrf=65.2)
    base.update(scores)
    return MetricReport(direction=direction, n_segments=10, **base)


def test_format_score():
    assert format_score(0.513, 4) == "0.5130"
    assert format_score(0.513, 4, trim=True) == "0.513"
    assert format_score(65.2, 2, trim=True) == "65.2"
    assert format_score(100.0, 2, trim=True) == "100"
    assert format_score(27.264999, 2) == "27.26"


def test_english_assamese_row_trimmed():
    text, rows = emit_eval_report([report()], trim=True)
    header, rule, row = text.splitlines()
    assert header.split()[:2] == ["Language", "Pairs"]
    assert row.split() == ["English-Assamese", "en_to_as", "27.26", "52.79", "0.3032", "0.513", "65.2"]
    assert rows[0]["meteor"] == 0.513 and rows[0]["language_pair"] == "English-Assamese"


def test_fixed_decimals_default():
    text, _ = emit_eval_report([report()])
    assert text.splitlines()[2].split()[2:] == ["27.26", "52.79", "0.3032", "0.5130", "65.20"]


def test_column_order():
    header = emit_eval_report([report()])[0].splitlines()[0]
    positions = [header.index(c) for c in COLUMNS]
    assert positions == sorted(positions)


def test_identical_corpus_row():
    refs = ["the cat sat on the mat", "a dog barked"]
    r = evaluate_all(refs, refs, (ENGLISH, ASM))
    cells = emit_eval_report([r])[0].splitlines()[2].split()
    # METEOR on identity is 1 - 0.5 (chunks/matches)^3 = 1 - 0.5 (2/9)^3
    assert cells[2:] == ["100.00", "0.00", "1.0000", f"{1 - 0.5 * (2 / 9) ** 3:.4f}", "100.00"]


def test_pair_name_blanked_on_repeat():
    reps = [report(), report(test_set="other"), report(direction=(ASM, ENGLISH)), report(direction=(ENGLISH, KHA))]
    lines = emit_eval_report(reps)[0].splitlines()[2:]
    assert lines[0].startswith("English-Assamese")
    assert lines[1].split()[0] == "other"
    # reverse direction shares the pair name
    assert lines[2].split()[0] == "as_to_en"
    assert lines[3].startswith("English-Khasi")


def test_empty_list():
    with pytest.raises(EmptyInput):
        emit_eval_report([])
