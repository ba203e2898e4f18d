"""Exception hierarchy shared by every pipeline stage."""

from typing import Optional


class StructureMatchError(Exception):
    """Base class for all pipeline errors."""


class InputFileError(StructureMatchError):
    """A file could not be opened or read."""


class ParseError(StructureMatchError):
    """A record in an input file is malformed."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}"
        if line is not None:
            location = f"{location}:{line}" if location else f"line {line}"
        super().__init__(f"{location}: {message}" if location else message)


class EmptyInputError(StructureMatchError):
    """An input contained no usable records."""


class InvalidArgumentError(StructureMatchError, ValueError):
    """An argument is outside its allowed range."""


class DimensionMismatchError(StructureMatchError, ValueError):
    """Two operands have incompatible shapes."""


class NonBinaryInputError(StructureMatchError, ValueError):
    """A Hamming-space vector holds entries other than 0 and 1."""


class DegenerateInputError(StructureMatchError):
    """The input admits no meaningful result (zero matrix, zero variance)."""


class EmptyVocabularyError(StructureMatchError):
    """No sentence contains a single known token."""


class ZeroVectorError(StructureMatchError, ValueError):
    """Cosine distance requested with a zero vector."""


class TooLargeError(StructureMatchError):
    """An exhaustive search exceeds its size guard."""


class ConfigError(StructureMatchError):
    """A configuration value is missing or invalid."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class ExperimentError(StructureMatchError):
    """A pipeline stage failed inside one experiment cell."""

    def __init__(self, train_size: int, seed: int, cause: Exception):
        self.train_size = train_size
        self.seed = seed
        self.cause = cause
        super().__init__(
            f"train_size={train_size}, seed={seed}: {type(cause).__name__}: {cause}"
        )
