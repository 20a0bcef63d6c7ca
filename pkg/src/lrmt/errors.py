"""Exception hierarchy.

Everything raised on purpose by the toolkit derives from :class:`LrmtError`.
The CLI maps :class:`DataError` to exit code 2 and :class:`EngineError` to
exit code 3.
"""

from __future__ import annotations


class LrmtError(Exception):
    pass


class DataError(LrmtError):
    """Bad input data or configuration."""


class InvalidConfig(DataError):
    pass


class InvalidOrder(DataError):
    def __init__(self, n: int):
        super().__init__(f"n-gram order must be >= 1, got {n}")
        self.n = n


class LineCountMismatch(DataError):
    def __init__(self, n_src: int, n_tgt: int):
        super().__init__(f"line count mismatch: source has {n_src} lines, target has {n_tgt}")
        self.n_src = n_src
        self.n_tgt = n_tgt

    def __eq__(self, other):
        return (
            isinstance(other, LineCountMismatch)
            and (self.n_src, self.n_tgt) == (other.n_src, other.n_tgt)
        )

    __hash__ = DataError.__hash__


class Utf8Error(DataError):
    def __init__(self, path: str, line_no: int):
        super().__init__(f"{path}:{line_no}: invalid UTF-8")
        self.path = path
        self.line_no = line_no


class MalformedRow(DataError):
    def __init__(self, line_no: int, n_columns: int):
        super().__init__(f"line {line_no}: expected 2 tab-separated columns, got {n_columns}")
        self.line_no = line_no
        self.n_columns = n_columns


class InvalidRecord(DataError):
    def __init__(self, path: str, line_no: int, reason: str):
        super().__init__(f"{path}:{line_no}: {reason}")
        self.path = path
        self.line_no = line_no


class LanguageMismatch(DataError):
    pass


class LengthMismatch(DataError):
    def __init__(self, n_a: int, n_b: int, what: str = "inputs"):
        super().__init__(f"{what} differ in length: {n_a} != {n_b}")
        self.n_a = n_a
        self.n_b = n_b


class EmptyInput(DataError):
    pass


class EmptyReference(DataError):
    pass


class ManifestParseError(DataError):
    pass


class InvalidOverride(DataError):
    pass


class PipelineError(DataError):
    """A pipeline stage failed; ``stage`` names it and ``__cause__`` holds the reason."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


class EngineError(LrmtError):
    pass


class EngineRequestFailed(EngineError):
    """A single engine request failed in a way that is worth retrying."""


class EngineUnavailable(EngineError):
    pass


class ProtocolViolation(EngineError):
    pass
