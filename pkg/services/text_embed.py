"""
Smooth inverse frequency (SIF) sentence embedding.

A sentence is the weighted mean of its word vectors, each word weighted by
a / (a + p(w)); the first singular direction of the stacked sentence matrix
is then projected out.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import SIF_A, SIF_REMOVE_PC
from .data import FeatureMatrix
from utils.errors import (
    DegenerateInputError,
    EmptyInputError,
    EmptyVocabularyError,
    InputFileError,
    InvalidArgumentError,
    ParseError,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


@dataclass(frozen=True)
class WordVectorTable:
    """Pretrained word vectors, one row per word."""
    dimension: int
    words: Tuple[str, ...]
    vectors: np.ndarray
    index: Dict[str, int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        vectors = np.array(self.vectors, dtype=float, copy=True)
        if vectors.ndim != 2 or vectors.shape != (len(self.words), self.dimension):
            raise InvalidArgumentError(
                f"{len(self.words)} words but vector block of shape {vectors.shape}"
            )
        if len(set(self.words)) != len(self.words):
            raise InvalidArgumentError("duplicate words in vector table")
        vectors.setflags(write=False)
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "index", {w: i for i, w in enumerate(self.words)})

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def __len__(self) -> int:
        return len(self.words)

    def vector(self, word: str) -> np.ndarray:
        return self.vectors[self.index[word]]


@dataclass(frozen=True)
class FrequencyTable:
    """Unigram probabilities p(w) used by the SIF weight."""
    entries: Dict[str, float]
    default_probability: float

    def __post_init__(self):
        for word, p in self.entries.items():
            if not 0 < p <= 1:
                raise InvalidArgumentError(f"p({word!r}) = {p} outside (0, 1]")
        if not 0 < self.default_probability <= 1:
            raise InvalidArgumentError(
                f"default probability {self.default_probability} outside (0, 1]"
            )

    def probability(self, word: str) -> float:
        return self.entries.get(word, self.default_probability)


@dataclass(frozen=True)
class SifConfig:
    """SIF smoothing parameter and principal-component switch."""
    a: float = SIF_A
    remove_pc: bool = SIF_REMOVE_PC

    def __post_init__(self):
        if not self.a > 0:
            raise InvalidArgumentError(f"SIF parameter a must be > 0, got {self.a}")


@dataclass(frozen=True)
class SifEmbedding:
    """Sentence embeddings plus what happened while building them."""
    features: FeatureMatrix
    empty_rows: Tuple[int, ...]
    direction: Optional[np.ndarray] = None


def _read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise InputFileError(f"cannot read {path}: {e}") from e


def load_word_vectors(path: PathLike) -> WordVectorTable:
    """
    Load GloVe text-format vectors ("word v1 ... vD" per line).

    Duplicate words keep their first occurrence.
    """
    words: List[str] = []
    rows: List[np.ndarray] = []
    seen = set()
    dimension = None

    for number, line in enumerate(_read_text(path).splitlines(), start=1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) < 2:
            raise ParseError(f"no vector for {parts[0]!r}", str(path), number)

        try:
            vector = np.asarray(parts[1:], dtype=float)
        except ValueError:
            raise ParseError("non-numeric vector entry", str(path), number) from None

        if dimension is None:
            dimension = vector.shape[0]
        elif vector.shape[0] != dimension:
            raise ParseError(
                f"dimension {vector.shape[0]} differs from {dimension}", str(path), number
            )

        word = parts[0]
        if word in seen:
            continue
        seen.add(word)
        words.append(word)
        rows.append(vector)

    if not words:
        raise EmptyInputError(f"{path}: no word vectors")

    logger.info("Loaded %d word vectors of dimension %d", len(words), dimension)
    return WordVectorTable(dimension, tuple(words), np.vstack(rows))


def load_frequencies(path: PathLike) -> FrequencyTable:
    """
    Load "word count-or-probability" lines.

    Values that already sum to at most one are read as probabilities;
    anything else is treated as counts and normalized by the total.
    """
    raw: Dict[str, float] = {}
    for number, line in enumerate(_read_text(path).splitlines(), start=1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 2:
            raise ParseError("expected 'word value'", str(path), number)
        try:
            value = float(parts[1])
        except ValueError:
            raise ParseError(f"non-numeric value {parts[1]!r}", str(path), number) from None
        if not value > 0 or not np.isfinite(value):
            raise ParseError(f"value must be positive, got {value}", str(path), number)
        raw.setdefault(parts[0], value)

    if not raw:
        raise EmptyInputError(f"{path}: no frequencies")

    values = np.fromiter(raw.values(), dtype=float)
    total = values.sum()
    if values.max() <= 1 and total <= 1 + 1e-9:
        entries = dict(raw)
    else:
        entries = {w: v / total for w, v in raw.items()}

    return FrequencyTable(entries, default_probability=min(entries.values()))


def tokenize(sentence: str) -> List[str]:
    """Lowercase and split on whitespace."""
    return sentence.lower().split()


def load_sentences(path: PathLike) -> List[List[str]]:
    """Load one sentence per line as token lists."""
    lines = _read_text(path).splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise EmptyInputError(f"{path}: no sentences")
    return [tokenize(line) for line in lines]


def sif_weight(word: str, freqs: FrequencyTable, a: float = SIF_A) -> float:
    """Return a / (a + p(word)), with the table default for unknown words."""
    if not a > 0:
        raise InvalidArgumentError(f"SIF parameter a must be > 0, got {a}")
    return a / (a + freqs.probability(word))


def first_singular_direction(values: np.ndarray) -> np.ndarray:
    """
    First right singular vector of a row-stacked matrix.

    The sign is fixed so that the first nonzero coordinate is positive.
    """
    values = np.asarray(values, dtype=float)
    if not np.any(values):
        raise DegenerateInputError("matrix is all zeros")

    _, _, vt = np.linalg.svd(values, full_matrices=False)
    u = vt[0]
    nonzero = np.flatnonzero(np.abs(u) > 1e-15)
    if nonzero.size and u[nonzero[0]] < 0:
        u = -u
    return u


def _project_out(values: np.ndarray, u: np.ndarray) -> np.ndarray:
    return values - np.outer(values @ u, u)


def remove_first_principal_component(matrix: FeatureMatrix) -> FeatureMatrix:
    """Subtract from every row its projection onto the first singular direction."""
    u = first_singular_direction(matrix.values)
    return FeatureMatrix(_project_out(matrix.values, u))


def sif_embed(
    sentences: Sequence[Sequence[str]],
    vectors: WordVectorTable,
    freqs: FrequencyTable,
    cfg: SifConfig = SifConfig(),
) -> SifEmbedding:
    """
    Embed tokenized sentences with SIF weighting.

    Tokens without a vector are skipped and do not count towards the
    sentence length. Sentences left with no known token become zero rows.

    Returns:
        SifEmbedding with features, the indices of empty sentences and the
        removed direction (None when remove_pc is off)
    """
    if not sentences:
        raise EmptyInputError("no sentences to embed")

    rows = np.zeros((len(sentences), vectors.dimension))
    empty = []

    for s, tokens in enumerate(sentences):
        known = [w for w in tokens if w in vectors]
        if not known:
            empty.append(s)
            continue
        weights = np.array([sif_weight(w, freqs, cfg.a) for w in known])
        block = vectors.vectors[[vectors.index[w] for w in known]]
        rows[s] = weights @ block / len(known)

    if len(empty) == len(sentences):
        raise EmptyVocabularyError("no sentence contains an in-vocabulary token")
    if empty:
        logger.warning("%d sentences have no known token; emitted as zero rows", len(empty))

    direction = None
    if cfg.remove_pc:
        direction = first_singular_direction(rows)
        rows = _project_out(rows, direction)

    return SifEmbedding(FeatureMatrix(rows), tuple(empty), direction)


def embed_sentences(
    sentences: Sequence[Sequence[str]],
    vectors: WordVectorTable,
    freqs: FrequencyTable,
    cfg: SifConfig = SifConfig(),
) -> FeatureMatrix:
    """SIF sentence embeddings as a feature matrix (see sif_embed)."""
    return sif_embed(sentences, vectors, freqs, cfg).features
