"""Training and inference manifests for an external trainer.

The manifest is plain JSON. It carries the base-model shape, the LoRA
adapter, three ordered training stages, decoding settings and the language
tokens the base model lacks. Nothing here runs a model.

Overrides are given as dotted paths (``adapter.rank``,
``stages.mlm.epochs``). A bare stage field such as ``epochs`` applies to
every stage that has it. Each changed leaf is listed under ``overridden``.
"""

from __future__ import annotations

import copy
import json
import math
import re
from collections.abc import Mapping, Sequence
from typing import Any

from lrmt.errors import InvalidConfig, InvalidOverride, ManifestParseError
from lrmt.langs import BASE_MODEL_TAGS, LanguageTag

__all__ = [
    "STAGE_ORDER",
    "DEFAULT_LANGUAGES",
    "emit_training_manifest",
    "validate_manifest",
    "canonical_json",
    "parse_override",
]

SCHEMA_VERSION = 1
STAGE_ORDER = ("mlm", "en_to_indic", "indic_to_en")
DEFAULT_LANGUAGES = tuple(LanguageTag.parse(x) for x in ("asm", "mni", "kha", "lus"))
PRECISIONS = ("bf16", "fp16", "fp32")

_MODEL = {
    "base_model": "facebook/nllb-200-3.3B",
    "embed_size": 2048,
    "ffn_size": 8192,
    "attn_heads": 16,
    "encoder_layers": 24,
    "decoder_layers": 24,
}
_ADAPTER = {
    "peft_type": "lora",
    "rank": 128,
    "lora_alpha": 256,
    "lora_dropout": 0.1,
    "target_modules": "all linear",
}
_STAGE = {
    "optimizer": "adafactor",
    "learning_rate": 1e-5,
    "epochs": 8,
    "precision": "bf16",
    # not given by the source hyperparameters; left to the trainer
    "batch_size": None,
    "warmup_steps": None,
    "lr_scheduler": None,
}
_P_MASK = 0.15
_INFERENCE = {"num_beams": 10, "repetition_penalty": 2.5}


# ---------------------------------------------------------------- checks
#
# One checker per leaf. Each returns an error message or None. They are
# shared by override validation and validate_manifest.


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_num(v) -> bool:
    return (_is_int(v) or isinstance(v, float)) and math.isfinite(v)


def _pos_int(v):
    return None if _is_int(v) and v > 0 else "must be a positive integer"


def _pos_num(v):
    return None if _is_num(v) and v > 0 else "must be a positive number"


def _unit_open(v):
    return None if _is_num(v) and 0 < v < 1 else "must be in (0, 1)"


def _dropout(v):
    return None if _is_num(v) and 0 <= v < 1 else "must be in [0, 1)"


def _at_least_one(v):
    return None if _is_num(v) and v >= 1 else "must be >= 1"


def _nonempty_str(v):
    return None if isinstance(v, str) and v else "must be a non-empty string"


def _opt(check):
    return lambda v: None if v is None else check(v)


def _target_modules(v):
    if isinstance(v, str) and v:
        return None
    if isinstance(v, list) and v and all(isinstance(x, str) and x for x in v):
        return None
    return "must be a non-empty string or list of strings"


_MODEL_CHECKS = {
    "base_model": _nonempty_str,
    "embed_size": _pos_int,
    "ffn_size": _pos_int,
    "attn_heads": _pos_int,
    "encoder_layers": _pos_int,
    "decoder_layers": _pos_int,
}
_ADAPTER_CHECKS = {
    "peft_type": lambda v: None if v == "lora" else "must be 'lora'",
    "rank": _pos_int,
    "lora_alpha": _pos_num,
    "lora_dropout": _dropout,
    "target_modules": _target_modules,
}
_STAGE_CHECKS = {
    "optimizer": _nonempty_str,
    "learning_rate": _pos_num,
    "epochs": _pos_int,
    "precision": lambda v: None if v in PRECISIONS else f"must be one of {', '.join(PRECISIONS)}",
    "batch_size": _opt(_pos_int),
    "warmup_steps": _opt(lambda v: None if _is_int(v) and v >= 0 else "must be a non-negative integer"),
    "lr_scheduler": _opt(_nonempty_str),
    "p_mask": _unit_open,
}
_INFERENCE_CHECKS = {
    "num_beams": lambda v: None if _is_int(v) and v >= 1 else "must be an integer >= 1",
    "repetition_penalty": _at_least_one,
}
_SECTIONS = {"model": _MODEL_CHECKS, "adapter": _ADAPTER_CHECKS, "inference": _INFERENCE_CHECKS}
_TAG_RE = re.compile(r"^[a-z]{3}_[A-Z][a-z]{3}$")
_LAYERS_TOTAL = _MODEL["encoder_layers"] + _MODEL["decoder_layers"]


# ---------------------------------------------------------------- emit


def _new_language_tokens(languages: Sequence[LanguageTag]) -> list[str]:
    out = []
    for lang in languages:
        tag = str(lang)
        if tag not in BASE_MODEL_TAGS and tag not in out:
            out.append(tag)
    return out


def _default_doc(languages: Sequence[LanguageTag]) -> dict[str, Any]:
    stages = []
    for name in STAGE_ORDER:
        stage = {"stage": name, **_STAGE}
        if name == "mlm":
            stage["p_mask"] = _P_MASK
        stages.append(stage)
    seen = []
    for lang in languages:
        if str(lang) not in seen:
            seen.append(str(lang))
    return {
        "schema_version": SCHEMA_VERSION,
        "languages": seen,
        "model": dict(_MODEL),
        "adapter": dict(_ADAPTER),
        "stages": stages,
        "inference": dict(_INFERENCE),
        "token_registry": _new_language_tokens(languages),
        "overridden": [],
    }


def _resolve(doc: dict, path: str) -> list[tuple[dict, str, str]]:
    """Map an override path to (container, key, canonical path) targets."""
    parts = path.split(".")
    if len(parts) == 1 and parts[0] in _STAGE_CHECKS:
        parts = ["stages", "*", parts[0]]
    if len(parts) == 2 and parts[0] in _SECTIONS:
        section, key = parts
        if key not in _SECTIONS[section]:
            raise InvalidOverride(f"unknown field {path!r}")
        return [(doc[section], key, path)]
    if len(parts) == 3 and parts[0] == "stages":
        _, which, key = parts
        if key not in _STAGE_CHECKS:
            raise InvalidOverride(f"unknown stage field {key!r}")
        names = [s["stage"] for s in doc["stages"]] if which == "*" else [which]
        targets = []
        for stage in doc["stages"]:
            if stage["stage"] in names and (key in stage or which != "*"):
                targets.append((stage, key, f"stages.{stage['stage']}.{key}"))
        if which != "*" and not targets:
            raise InvalidOverride(f"unknown stage {which!r}")
        return targets
    raise InvalidOverride(f"unknown override path {path!r}")


def emit_training_manifest(
    languages: Sequence[LanguageTag] = DEFAULT_LANGUAGES,
    overrides: Mapping[str, Any] | None = None,
) -> dict[str, Any]:
    """Build the manifest; ``overrides`` maps dotted paths to new values."""
    if not languages:
        raise InvalidConfig("at least one language is required")
    doc = _default_doc(languages)
    changed = set()
    for path, value in (overrides or {}).items():
        for container, key, canonical in _resolve(doc, path):
            if key == "p_mask" and container.get("stage") != "mlm":
                raise InvalidOverride(f"{canonical}: only the mlm stage has p_mask")
            checks = _STAGE_CHECKS if "stage" in container else _SECTIONS[canonical.split(".")[0]]
            err = checks[key](value)
            if err:
                raise InvalidOverride(f"{canonical} {err}, got {value!r}")
            container[key] = copy.deepcopy(value)
            changed.add(canonical)
    m = doc["model"]
    if m["encoder_layers"] + m["decoder_layers"] != _LAYERS_TOTAL:
        raise InvalidOverride(f"encoder_layers + decoder_layers must stay {_LAYERS_TOTAL}")
    doc["overridden"] = sorted(changed)
    return doc


def canonical_json(doc: Any) -> str:
    """Sorted keys, 2-space indent, LF, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def parse_override(text: str) -> tuple[str, Any]:
    """Parse ``path=value``; the value is read as JSON, else kept as a string."""
    path, sep, raw = text.partition("=")
    if not sep or not path.strip():
        raise InvalidOverride(f"expected PATH=VALUE, got {text!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return path.strip(), value


# ---------------------------------------------------------------- validate


def _check_section(doc, name, checks, out):
    section = doc.get(name)
    if not isinstance(section, dict):
        out.append(f"{name}: missing or not an object")
        return
    for key, check in checks.items():
        if key not in section:
            out.append(f"{name}.{key}: missing")
            continue
        err = check(section[key])
        if err:
            out.append(f"{name}.{key} {err}")


def validate_manifest(doc: Mapping[str, Any] | str | bytes) -> list[str]:
    """Return one message per violated rule; an empty list means valid."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            raise ManifestParseError(f"manifest is not valid JSON: {e}") from None
    if not isinstance(doc, Mapping):
        raise ManifestParseError("manifest must be a JSON object")

    out: list[str] = []
    for name, checks in _SECTIONS.items():
        _check_section(doc, name, checks, out)
    m = doc.get("model")
    if isinstance(m, dict) and _is_int(m.get("encoder_layers")) and _is_int(m.get("decoder_layers")):
        if m["encoder_layers"] + m["decoder_layers"] != _LAYERS_TOTAL:
            out.append(f"model: encoder_layers + decoder_layers must be {_LAYERS_TOTAL}")

    stages = doc.get("stages")
    if not isinstance(stages, list) or not all(isinstance(s, dict) for s in stages):
        out.append("stages: missing or not a list of objects")
    else:
        names = [s.get("stage") for s in stages]
        if tuple(names) != STAGE_ORDER:
            out.append(f"stages: order must be {list(STAGE_ORDER)}, got {names}")
        for s in stages:
            label = f"stages.{s.get('stage')}"
            for key, check in _STAGE_CHECKS.items():
                if key == "p_mask":
                    continue
                if key not in s:
                    out.append(f"{label}.{key}: missing")
                elif check(s[key]):
                    out.append(f"{label}.{key} {check(s[key])}")
            is_mlm = s.get("stage") == "mlm"
            if is_mlm and "p_mask" not in s:
                out.append(f"{label}: mlm stage needs p_mask")
            elif not is_mlm and "p_mask" in s:
                out.append(f"{label}: p_mask is only allowed on the mlm stage")
            elif is_mlm and _unit_open(s["p_mask"]):
                out.append(f"{label}.p_mask {_unit_open(s['p_mask'])}")

    reg = doc.get("token_registry")
    if not isinstance(reg, list) or not all(isinstance(t, str) for t in reg):
        out.append("token_registry: missing or not a list of strings")
    else:
        if len(set(reg)) != len(reg):
            out.append("token_registry: duplicate tags")
        clash = sorted(set(reg) & BASE_MODEL_TAGS)
        if clash:
            out.append(f"token_registry: already supported by the base model: {', '.join(clash)}")
        bad = [t for t in reg if not _TAG_RE.match(t)]
        if bad:
            out.append(f"token_registry: malformed tags: {', '.join(bad)}")
    return out
