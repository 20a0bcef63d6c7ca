import copy
import json
from pathlib import Path

import pytest

from lrmt.errors import InvalidConfig, InvalidOverride, ManifestParseError
from lrmt.langs import LanguageTag
from lrmt.manifest import (
    canonical_json,
    emit_training_manifest,
    parse_override,
    validate_manifest,
)

GOLDEN = Path(__file__).parent / "data" / "manifest_default.json"
ASM = LanguageTag.parse("asm")
KHA = LanguageTag.parse("kha")


def test_default_values():
    doc = emit_training_manifest()
    assert doc["stages"][0]["p_mask"] == 0.15
    assert doc["adapter"]["rank"] == 128
    assert doc["inference"]["num_beams"] == 10
    assert doc["inference"]["repetition_penalty"] == 2.5
    assert [s["stage"] for s in doc["stages"]] == ["mlm", "en_to_indic", "indic_to_en"]
    assert doc["model"]["encoder_layers"] + doc["model"]["decoder_layers"] == 48
    for s in doc["stages"]:
        assert (s["optimizer"], s["learning_rate"], s["epochs"], s["precision"]) == ("adafactor", 1e-5, 8, "bf16")
        assert s["batch_size"] is None and s["warmup_steps"] is None and s["lr_scheduler"] is None
    assert doc["overridden"] == []


def test_golden_file_byte_identical():
    assert canonical_json(emit_training_manifest()).encode("utf-8") == GOLDEN.read_bytes()
    assert validate_manifest(GOLDEN.read_bytes()) == []


def test_token_registry():
    assert emit_training_manifest([ASM, KHA])["token_registry"] == ["kha_Latn"]
    assert emit_training_manifest([ASM])["token_registry"] == []
    assert emit_training_manifest([KHA, KHA])["languages"] == ["kha_Latn"]


def test_override_epochs_everywhere():
    doc = emit_training_manifest(overrides={"epochs": 1})
    assert [s["epochs"] for s in doc["stages"]] == [1, 1, 1]
    assert doc["overridden"] == ["stages.en_to_indic.epochs", "stages.indic_to_en.epochs", "stages.mlm.epochs"]
    assert validate_manifest(doc) == []


def test_override_specific_paths():
    doc = emit_training_manifest(
        overrides={"adapter.rank": 64, "stages.mlm.p_mask": 0.3, "stages.indic_to_en.batch_size": 16}
    )
    assert doc["adapter"]["rank"] == 64
    assert doc["stages"][0]["p_mask"] == 0.3
    assert doc["stages"][2]["batch_size"] == 16 and doc["stages"][1]["batch_size"] is None
    assert doc["overridden"] == ["adapter.rank", "stages.indic_to_en.batch_size", "stages.mlm.p_mask"]


@pytest.mark.parametrize(
    "overrides",
    [
        {"adapter.rank": 0},
        {"adapter.lora_dropout": 1.0},
        {"stages.mlm.p_mask": 1.5},
        {"stages.en_to_indic.p_mask": 0.1},
        {"inference.num_beams": 0},
        {"inference.repetition_penalty": 0.5},
        {"model.encoder_layers": 12},
        {"epochs": True},
        {"precision": "int8"},
        {"nope": 1},
        {"stages.bogus.epochs": 1},
        {"model.colour": "blue"},
    ],
)
def test_invalid_overrides(overrides):
    with pytest.raises(InvalidOverride):
        emit_training_manifest(overrides=overrides)


def test_empty_languages():
    with pytest.raises(InvalidConfig):
        emit_training_manifest([])


def test_parse_override():
    assert parse_override("epochs=1") == ("epochs", 1)
    assert parse_override("stages.mlm.lr_scheduler=linear") == ("stages.mlm.lr_scheduler", "linear")
    assert parse_override("adapter.target_modules=[\"q\",\"v\"]") == ("adapter.target_modules", ["q", "v"])
    with pytest.raises(InvalidOverride):
        parse_override("epochs")


def test_validate_p_mask_on_translation_stage():
    doc = emit_training_manifest()
    doc["stages"][1]["p_mask"] = 0.15
    assert len(validate_manifest(doc)) == 1


def test_validate_reordered_stages():
    doc = emit_training_manifest()
    doc["stages"] = [doc["stages"][1], doc["stages"][0], doc["stages"][2]]
    assert len(validate_manifest(doc)) == 1


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d["model"].update(encoder_layers=20),
        lambda d: d["adapter"].update(rank=-1),
        lambda d: d["stages"][0].pop("p_mask"),
        lambda d: d["inference"].update(num_beams=0),
        lambda d: d.update(token_registry=["eng_Latn"]),
        lambda d: d.update(token_registry=["kha_Latn", "kha_Latn"]),
        lambda d: d.update(token_registry=["khasi"]),
        lambda d: d.pop("inference"),
        lambda d: d["stages"][2].pop("epochs"),
    ],
)
def test_validate_single_violation(mutate):
    doc = copy.deepcopy(emit_training_manifest())
    mutate(doc)
    assert len(validate_manifest(doc)) == 1, validate_manifest(doc)


def test_validate_parse_errors():
    with pytest.raises(ManifestParseError):
        validate_manifest("{not json")
    with pytest.raises(ManifestParseError):
        validate_manifest(json.dumps([1, 2]))


def test_round_trip_through_text():
    doc = emit_training_manifest([KHA], {"learning_rate": 3e-5})
    assert validate_manifest(canonical_json(doc)) == []
    assert json.loads(canonical_json(doc)) == doc
