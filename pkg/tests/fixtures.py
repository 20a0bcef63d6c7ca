"""Deterministic synthetic corpora for pipeline and acceptance tests."""

from __future__ import annotations

import random
from pathlib import Path

ENG_WORDS = (
    "the state government said on monday that new roads will be built in the hill districts "
    "before the rains farmers and students welcomed plan river bridge school market health"
).split()
BENG_LETTERS = [chr(c) for c in range(0x0995, 0x09A9)] + ["া", "ি", "ে", "্র"]
LATIN_WORDS = "ka u ki ba la ia ha jong kiba sngi shnong hapoh nga leh an chu kan tih a mi".split()

# rows of the per-origin source table: language -> [(origin, pairs)]
TABLE = {
    "asm": [("WMT", 50_000), ("BPCC", 35_354), ("PMIndia", 9_732)],
    "mni": [("WMT", 21_687), ("PMIndia", 7_419), ("OLD", 6_193)],
    "kha": [("WMT", 24_000), ("BackTranslated", 102_070)],
    "lus": [("WMT", 50_000), ("BackTranslated", 30_164)],
}
TOTALS = {"asm": 95_086, "mni": 35_036, "kha": 126_070, "lus": 80_164}
BENGALI_SCRIPT = {"asm", "mni"}


def _bengali_vocab(size: int = 600) -> list[str]:
    rng = random.Random("bengali-vocab")
    return ["".join(rng.choices(BENG_LETTERS, k=rng.randint(2, 5))) for _ in range(size)]


BENG_WORDS = _bengali_vocab()


def english_line(rng: random.Random, i: int) -> str:
    words = rng.choices(ENG_WORDS, k=rng.randint(4, 14))
    return f"{' '.join(words).capitalize()} {i}."


def native_line(rng: random.Random, code: str, i: int) -> str:
    n = rng.randint(4, 14)
    if code in BENGALI_SCRIPT:
        return f"{' '.join(rng.choices(BENG_WORDS, k=n))} {i}।"
    return f"{' '.join(rng.choices(LATIN_WORDS, k=n)).capitalize()} {i}."


def write_parallel(directory: Path, stem: str, code: str, n: int, seed: int = 0) -> tuple[Path, Path]:
    """Write ``stem.en`` and ``stem.<code>`` with ``n`` aligned lines."""
    rng = random.Random(f"{stem}:{seed}")
    src = directory / f"{stem}.en"
    tgt = directory / f"{stem}.{code}"
    with open(src, "w", encoding="utf-8", newline="\n") as fe, open(tgt, "w", encoding="utf-8", newline="\n") as ft:
        for i in range(n):
            fe.write(english_line(rng, i) + "\n")
            ft.write(native_line(rng, code, i) + "\n")
    return src, tgt


def write_tsv(directory: Path, stem: str, code: str, n: int, seed: int = 0, english_first: bool = True) -> Path:
    rng = random.Random(f"{stem}:{seed}")
    path = directory / f"{stem}.tsv"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i in range(n):
            e, x = english_line(rng, i), native_line(rng, code, i)
            fh.write(f"{e}\t{x}\n" if english_first else f"{x}\t{e}\n")
    return path


def write_mono(directory: Path, stem: str, code: str, n: int, seed: int = 0) -> Path:
    rng = random.Random(f"{stem}:{seed}")
    path = directory / f"{stem}.{code}"
    path.write_text("".join(native_line(rng, code, i) + "\n" for i in range(n)), encoding="utf-8")
    return path


def write_config(directory: Path, body: str) -> Path:
    path = directory / "pipeline.toml"
    path.write_text(body, encoding="utf-8")
    return path
