"""Language tags in NLLB notation (``asm_Beng``) and the language registry."""

from __future__ import annotations

import re
from dataclasses import dataclass

from lrmt.errors import InvalidConfig

_TAG_RE = re.compile(r"^([a-z]{3})_([A-Z][a-z]{3})$")

# ISO 639-3 code -> (default script, English name)
REGISTRY: dict[str, tuple[str, str]] = {
    "eng": ("Latn", "English"),
    "asm": ("Beng", "Assamese"),
    "mni": ("Beng", "Manipuri"),
    "kha": ("Latn", "Khasi"),
    "lus": ("Latn", "Mizo"),
}

# tags the base translation model already has language tokens for
BASE_MODEL_TAGS = frozenset({"eng_Latn", "asm_Beng", "mni_Beng", "lus_Latn"})

# short codes used in test-set names, e.g. en_to_as
SHORT_CODES = {"eng": "en", "asm": "as", "mni": "mn", "kha": "kh", "lus": "mz"}


def register_language(code: str, script: str, name: str) -> None:
    LanguageTag(code, script)  # validates the shape
    REGISTRY[code] = (script, name)


@dataclass(frozen=True, order=True)
class LanguageTag:
    iso639_3: str
    script: str

    def __post_init__(self):
        if not _TAG_RE.match(f"{self.iso639_3}_{self.script}"):
            raise InvalidConfig(f"malformed language tag {self.iso639_3!r}/{self.script!r}")

    def __str__(self) -> str:
        return f"{self.iso639_3}_{self.script}"

    @property
    def name(self) -> str:
        return REGISTRY.get(self.iso639_3, ("", self.iso639_3))[1]

    @property
    def short(self) -> str:
        return SHORT_CODES.get(self.iso639_3, self.iso639_3)

    @classmethod
    def parse(cls, text: str) -> LanguageTag:
        """Parse ``asm_Beng`` or a bare registered code such as ``asm``."""
        text = text.strip()
        m = _TAG_RE.match(text)
        if m:
            code, script = m.groups()
        elif text in REGISTRY:
            code, script = text, REGISTRY[text][0]
        else:
            raise InvalidConfig(f"unknown language {text!r}")
        if code not in REGISTRY:
            raise InvalidConfig(f"language {code!r} is not registered")
        return cls(code, script)


ENGLISH = LanguageTag("eng", "Latn")
