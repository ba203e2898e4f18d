"""Core data types, file ingestion and train/test splitting."""

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from config.settings import FEATURE_DELIMITERS, FLOAT_FORMAT
from utils.errors import (
    EmptyInputError,
    InputFileError,
    InvalidArgumentError,
    NonBinaryInputError,
    ParseError,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
Pair = Tuple[int, int]

_PANDAS_LINE = re.compile(r"line (\d+)")


class SpaceKind(str, Enum):
    """Geometry of a modality's feature space."""
    EUCLIDEAN = "euclidean"
    HAMMING = "hamming"
    CALIBRATED = "calibrated"

    @classmethod
    def parse(cls, value: Union[str, "SpaceKind"]) -> "SpaceKind":
        try:
            return cls(value)
        except ValueError:
            raise InvalidArgumentError(f"unknown space kind: {value!r}") from None


def _frozen_array(values, dtype=float) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class FeatureMatrix:
    """Per-object embeddings of one modality, one row per object."""
    values: np.ndarray

    def __post_init__(self):
        values = _frozen_array(self.values)
        if values.ndim != 2:
            raise InvalidArgumentError(f"feature matrix must be 2-D, got {values.ndim}-D")
        if values.shape[0] < 1 or values.shape[1] < 1:
            raise EmptyInputError(f"feature matrix has shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise InvalidArgumentError("feature matrix contains non-finite entries")
        object.__setattr__(self, "values", values)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class ModalityDataset:
    """Features of one modality with ids, class labels and space kind."""
    features: FeatureMatrix
    ids: Tuple[str, ...]
    labels: Tuple[str, ...]
    space: SpaceKind = SpaceKind.EUCLIDEAN

    def __post_init__(self):
        ids = tuple(str(i) for i in self.ids)
        labels = tuple(str(label) for label in self.labels)
        space = SpaceKind.parse(self.space)
        n = self.features.rows

        if len(ids) != n or len(labels) != n:
            raise InvalidArgumentError(
                f"{n} feature rows but {len(ids)} ids and {len(labels)} labels"
            )
        if len(set(ids)) != n:
            raise InvalidArgumentError("object ids are not unique")
        if space is SpaceKind.CALIBRATED:
            raise InvalidArgumentError("a dataset cannot live in the calibrated space")
        if space is SpaceKind.HAMMING:
            values = self.features.values
            if not np.all((values == 0) | (values == 1)):
                raise NonBinaryInputError("Hamming dataset holds entries other than 0/1")

        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "space", space)

    @property
    def size(self) -> int:
        return self.features.rows

    @property
    def values(self) -> np.ndarray:
        return self.features.values


@dataclass(frozen=True)
class PairedCorpus:
    """Two modalities and their ground-truth matched pairs."""
    mod_a: ModalityDataset
    mod_b: ModalityDataset
    pairs: Tuple[Pair, ...]

    def __post_init__(self):
        pairs = tuple((int(a), int(b)) for a, b in self.pairs)
        seen_a, seen_b = set(), set()

        for a, b in pairs:
            if not 0 <= a < self.mod_a.size or not 0 <= b < self.mod_b.size:
                raise InvalidArgumentError(f"pair ({a}, {b}) out of range")
            if a in seen_a or b in seen_b:
                raise InvalidArgumentError(f"pair ({a}, {b}) reuses a matched object")
            seen_a.add(a)
            seen_b.add(b)

        object.__setattr__(self, "pairs", pairs)


@dataclass(frozen=True)
class Split:
    """Training pairs and held-out objects of one random split."""
    train_pairs: Tuple[Pair, ...]
    test_indices_a: Tuple[int, ...] = field(default_factory=tuple)
    test_indices_b: Tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if len(self.train_pairs) < 1:
            raise InvalidArgumentError("a split needs at least one training pair")
        train_a = {a for a, _ in self.train_pairs}
        train_b = {b for _, b in self.train_pairs}
        if train_a & set(self.test_indices_a) or train_b & set(self.test_indices_b):
            raise InvalidArgumentError("train and test objects overlap")

    @property
    def empty_test(self) -> bool:
        return not self.test_indices_a or not self.test_indices_b


def load_feature_matrix(path: PathLike, fmt: str = "csv") -> FeatureMatrix:
    """
    Load an n x d real matrix from a delimited text file.

    Args:
        path: File with one object per line
        fmt: 'csv' or 'tsv'

    Returns:
        FeatureMatrix in file row order
    """
    if fmt not in FEATURE_DELIMITERS:
        raise InvalidArgumentError(f"unknown feature format: {fmt!r}")

    try:
        frame = pd.read_csv(
            path,
            sep=FEATURE_DELIMITERS[fmt],
            header=None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError:
        raise EmptyInputError(f"{path}: no data rows") from None
    except pd.errors.ParserError as e:
        match = _PANDAS_LINE.search(str(e))
        line = int(match.group(1)) if match else None
        raise ParseError("inconsistent field count", str(path), line) from None
    except (OSError, UnicodeDecodeError) as e:
        raise InputFileError(f"cannot read {path}: {e}") from e

    # Trailing blank lines are not records
    blank = frame.isna().all(axis=1) | (frame == "").all(axis=1)
    while len(frame) and blank.iloc[len(frame) - 1]:
        frame = frame.iloc[:-1]
        blank = blank.iloc[:-1]

    if frame.empty:
        raise EmptyInputError(f"{path}: no data rows")

    ragged = frame.isna().any(axis=1).to_numpy()
    if ragged.any():
        row = int(np.argmax(ragged))
        raise ParseError(
            f"expected {frame.shape[1]} fields", str(path), row + 1
        )

    numeric = frame.apply(lambda col: pd.to_numeric(col.str.strip(), errors="coerce"))
    values = numeric.to_numpy(dtype=float)
    bad = ~np.isfinite(values)
    if bad.any():
        row, col = (int(i) for i in np.argwhere(bad)[0])
        raise ParseError(
            f"field {col + 1} is not a finite real: {frame.iat[row, col]!r}",
            str(path),
            row + 1,
        )

    logger.info("Loaded %d x %d feature matrix from %s", values.shape[0], values.shape[1], path)
    return FeatureMatrix(values)


def write_feature_matrix(matrix: FeatureMatrix, path: PathLike, fmt: str = "csv") -> None:
    """Write a feature matrix so that reloading reproduces it exactly."""
    if fmt not in FEATURE_DELIMITERS:
        raise InvalidArgumentError(f"unknown feature format: {fmt!r}")
    pd.DataFrame(matrix.values).to_csv(
        path,
        sep=FEATURE_DELIMITERS[fmt],
        header=False,
        index=False,
        float_format=FLOAT_FORMAT,
    )


def _read_lines(path: PathLike) -> List[str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise InputFileError(f"cannot read {path}: {e}") from e

    lines = [line.strip() for line in text.splitlines()]
    while lines and not lines[-1]:
        lines.pop()
    return lines


def load_labels(path: PathLike) -> List[str]:
    """Load one class label per line, in file order."""
    lines = _read_lines(path)
    if not lines:
        raise EmptyInputError(f"{path}: no labels")

    for number, line in enumerate(lines, start=1):
        if not line:
            raise ParseError("empty label", str(path), number)
    return lines


def load_pairs(path: PathLike) -> List[Pair]:
    """Load 0-based 'indexA,indexB' lines."""
    pairs = []
    for number, line in enumerate(_read_lines(path), start=1):
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 2:
            raise ParseError("expected 'indexA,indexB'", str(path), number)
        try:
            a, b = int(fields[0]), int(fields[1])
        except ValueError:
            raise ParseError(f"non-integer index in {line!r}", str(path), number) from None
        if a < 0 or b < 0:
            raise ParseError("negative index", str(path), number)
        pairs.append((a, b))

    if not pairs:
        raise EmptyInputError(f"{path}: no pairs")
    return pairs


def load_modality(
    features_path: PathLike,
    labels_path: PathLike,
    space: Union[str, SpaceKind] = SpaceKind.EUCLIDEAN,
    fmt: str = "csv",
    ids: Optional[Sequence[str]] = None,
) -> ModalityDataset:
    """Load features and labels of one modality into a validated dataset."""
    features = load_feature_matrix(features_path, fmt)
    labels = load_labels(labels_path)
    if ids is None:
        ids = [str(i) for i in range(features.rows)]
    return ModalityDataset(features, tuple(ids), tuple(labels), SpaceKind.parse(space))


def load_corpus(
    features_a: PathLike,
    labels_a: PathLike,
    features_b: PathLike,
    labels_b: PathLike,
    pairs: PathLike,
    space_a: Union[str, SpaceKind] = SpaceKind.EUCLIDEAN,
    space_b: Union[str, SpaceKind] = SpaceKind.EUCLIDEAN,
    fmt: str = "csv",
) -> PairedCorpus:
    """Load both modalities and their pairs."""
    mod_a = load_modality(features_a, labels_a, space_a, fmt)
    mod_b = load_modality(features_b, labels_b, space_b, fmt)
    corpus = PairedCorpus(mod_a, mod_b, tuple(load_pairs(pairs)))
    logger.info(
        "Corpus: %d objects in A, %d in B, %d pairs",
        mod_a.size, mod_b.size, len(corpus.pairs),
    )
    return corpus


def split_corpus(corpus: PairedCorpus, train_size: int, seed: int) -> Split:
    """
    Draw a random training subset of the matched pairs.

    Args:
        corpus: Paired corpus
        train_size: Number of training pairs, 1 <= train_size <= |pairs|
        seed: Seed of the draw; equal seeds give equal splits

    Returns:
        Split whose test side holds every object outside the training pairs
    """
    total = len(corpus.pairs)
    if not 1 <= train_size <= total:
        raise InvalidArgumentError(f"train_size {train_size} outside [1, {total}]")

    rng = np.random.default_rng(seed)
    chosen = np.sort(rng.choice(total, size=train_size, replace=False))
    train_pairs = tuple(corpus.pairs[i] for i in chosen)

    used_a = {a for a, _ in train_pairs}
    used_b = {b for _, b in train_pairs}

    return Split(
        train_pairs=train_pairs,
        test_indices_a=tuple(i for i in range(corpus.mod_a.size) if i not in used_a),
        test_indices_b=tuple(i for i in range(corpus.mod_b.size) if i not in used_b),
    )
