"""Space-structure representation: objects as distances to reference points."""

import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.spatial.distance import cdist

from config.settings import CONDITION_WARNING, FLOAT_FORMAT, MAX_COSINE_DISTANCE
from .data import ModalityDataset, SpaceKind
from utils.errors import (
    DimensionMismatchError,
    EmptyInputError,
    InputFileError,
    InvalidArgumentError,
    NonBinaryInputError,
    ParseError,
    ZeroVectorError,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class StructureMetric(str, Enum):
    """Distance between two rows of a structure space."""
    EUCLIDEAN = "euclidean"
    COSINE = "cosine"

    @classmethod
    def parse(cls, value: Union[str, "StructureMetric"]) -> "StructureMetric":
        try:
            return cls(value)
        except ValueError:
            raise InvalidArgumentError(f"unknown structure metric: {value!r}") from None


@dataclass(frozen=True)
class StructureMatrix:
    """
    n x k distances from every object to every reference point.

    Column j belongs to reference ref_ids[j]. Entries are nonnegative
    except in the calibrated space, where an affine map may shift them.
    """
    values: np.ndarray
    space_kind: SpaceKind
    ref_ids: Tuple[str, ...]
    row_ids: Optional[Tuple[str, ...]] = None
    condition: Optional[float] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        space = SpaceKind.parse(self.space_kind)
        ref_ids = tuple(str(r) for r in self.ref_ids)

        if values.ndim != 2:
            raise InvalidArgumentError(f"structure matrix must be 2-D, got {values.ndim}-D")
        if values.shape[1] != len(ref_ids):
            raise DimensionMismatchError(
                f"{values.shape[1]} columns but {len(ref_ids)} reference ids"
            )
        if not np.all(np.isfinite(values)):
            raise InvalidArgumentError("structure matrix contains non-finite entries")
        if space is not SpaceKind.CALIBRATED and np.any(values < 0):
            raise InvalidArgumentError("distances must be nonnegative")
        if self.row_ids is not None and len(self.row_ids) != values.shape[0]:
            raise DimensionMismatchError(
                f"{values.shape[0]} rows but {len(self.row_ids)} row ids"
            )

        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "space_kind", space)
        object.__setattr__(self, "ref_ids", ref_ids)
        if self.row_ids is not None:
            object.__setattr__(self, "row_ids", tuple(str(r) for r in self.row_ids))

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def refs(self) -> int:
        return self.values.shape[1]

    def take(self, indices: Sequence[int]) -> "StructureMatrix":
        """Sub-matrix of the given rows, same columns."""
        indices = list(indices)
        row_ids = None
        if self.row_ids is not None:
            row_ids = tuple(self.row_ids[i] for i in indices)
        return StructureMatrix(
            self.values[indices], self.space_kind, self.ref_ids, row_ids, self.condition
        )


def _check_pair(x: np.ndarray, o: np.ndarray) -> None:
    if x.shape != o.shape or x.ndim != 1:
        raise DimensionMismatchError(f"shapes {x.shape} and {o.shape} differ")


def euclidean_distance(x: Sequence[float], o: Sequence[float]) -> float:
    """Euclidean distance between two real vectors."""
    x = np.asarray(x, dtype=float)
    o = np.asarray(o, dtype=float)
    _check_pair(x, o)
    return float(np.sqrt(np.sum((x - o) ** 2)))


def _check_binary(*vectors: np.ndarray) -> None:
    for v in vectors:
        if not np.all((v == 0) | (v == 1)):
            raise NonBinaryInputError("Hamming distance needs 0/1 entries")


def hamming_distance(y: Sequence[int], o: Sequence[int]) -> int:
    """Number of coordinates where two binary vectors differ."""
    y = np.asarray(y)
    o = np.asarray(o)
    _check_pair(y, o)
    _check_binary(y, o)
    return int(np.count_nonzero(np.logical_xor(y, o)))


def reference_condition(points: np.ndarray) -> float:
    """
    Condition number of the reference differences o_j - o_1.

    Large values mean the references are close to colinear (or lie in a
    low-dimensional affine subspace), so structure rows locate objects
    less precisely. A single reference has condition 1 by convention.
    """
    points = np.asarray(points, dtype=float)
    if points.shape[0] < 2:
        return 1.0
    differences = points[1:] - points[0]
    singular = np.linalg.svd(differences, compute_uv=False)
    if singular[-1] <= singular[0] * np.finfo(float).eps:
        return float("inf")
    return float(singular[0] / singular[-1])


def build_structure(data: ModalityDataset, ref_indices: Sequence[int]) -> StructureMatrix:
    """
    Represent every object of a modality by its distances to the references.

    Args:
        data: Modality whose space kind picks Euclidean or Hamming distance
        ref_indices: k distinct row indices of the reference objects

    Returns:
        StructureMatrix with column j holding distances to ref_indices[j]
    """
    refs = [int(i) for i in ref_indices]
    if not refs:
        raise InvalidArgumentError("at least one reference is needed")
    if len(set(refs)) != len(refs):
        raise InvalidArgumentError(f"duplicate reference indices: {refs}")
    if any(not 0 <= i < data.size for i in refs):
        raise InvalidArgumentError(f"reference index out of range [0, {data.size})")

    values = data.values
    points = values[refs]

    if data.space is SpaceKind.HAMMING:
        distances = cdist(values, points, metric="hamming") * values.shape[1]
        distances = np.rint(distances)
    else:
        distances = cdist(values, points, metric="euclidean")

    condition = reference_condition(points)
    if condition > CONDITION_WARNING:
        logger.warning(
            "Reference set is near-colinear (condition %.3g); structure rows may collide",
            condition,
        )

    return StructureMatrix(
        distances,
        data.space,
        tuple(data.ids[i] for i in refs),
        data.ids,
        condition,
    )


def structure_distance(
    r_i: Sequence[float],
    r_j: Sequence[float],
    metric: Union[str, StructureMetric] = StructureMetric.COSINE,
) -> float:
    """Euclidean or cosine distance between two structure rows."""
    r_i = np.asarray(r_i, dtype=float)
    r_j = np.asarray(r_j, dtype=float)
    _check_pair(r_i, r_j)
    metric = StructureMetric.parse(metric)

    if metric is StructureMetric.EUCLIDEAN:
        return euclidean_distance(r_i, r_j)

    norm_i = np.linalg.norm(r_i)
    norm_j = np.linalg.norm(r_j)
    if norm_i == 0 or norm_j == 0:
        raise ZeroVectorError("cosine distance with a zero structure row")
    similarity = float(r_i @ r_j) / (norm_i * norm_j)
    return float(np.clip(1.0 - similarity, 0.0, MAX_COSINE_DISTANCE))


def pairwise_structure_distances(
    queries: np.ndarray,
    targets: np.ndarray,
    metric: Union[str, StructureMetric] = StructureMetric.COSINE,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Distances between every query row and every target row.

    Returns:
        (distances, zero_mask): distances of shape (q, t); for the cosine
        metric, pairs involving a zero row get MAX_COSINE_DISTANCE and are
        marked in zero_mask
    """
    queries = np.atleast_2d(np.asarray(queries, dtype=float))
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    if queries.shape[1] != targets.shape[1]:
        raise DimensionMismatchError(
            f"query rows have {queries.shape[1]} dims, targets {targets.shape[1]}"
        )
    metric = StructureMetric.parse(metric)

    if metric is StructureMetric.EUCLIDEAN:
        distances = cdist(queries, targets, metric="euclidean")
        return distances, np.zeros(distances.shape, dtype=bool)

    query_zero = ~np.any(queries, axis=1)
    target_zero = ~np.any(targets, axis=1)
    zero_mask = query_zero[:, None] | target_zero[None, :]

    with np.errstate(invalid="ignore", divide="ignore"):
        distances = cdist(queries, targets, metric="cosine")
    distances = np.clip(distances, 0.0, MAX_COSINE_DISTANCE)
    distances[zero_mask] = MAX_COSINE_DISTANCE
    return distances, zero_mask


def write_structure(structure: StructureMatrix, path: PathLike) -> None:
    """Write a structure matrix as csv with the reference ids as header."""
    frame = pd.DataFrame(structure.values, columns=list(structure.ref_ids))
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)


def load_structure(
    path: PathLike,
    space_kind: Union[str, SpaceKind] = SpaceKind.EUCLIDEAN,
) -> StructureMatrix:
    """Load a structure matrix written by write_structure."""
    try:
        frame = pd.read_csv(path, dtype=float)
    except pd.errors.EmptyDataError:
        raise EmptyInputError(f"{path}: empty structure file") from None
    except (pd.errors.ParserError, ValueError) as e:
        raise ParseError(str(e), str(path)) from None
    except (OSError, UnicodeDecodeError) as e:
        raise InputFileError(f"cannot read {path}: {e}") from e

    if frame.empty:
        raise EmptyInputError(f"{path}: no structure rows")
    return StructureMatrix(frame.to_numpy(), space_kind, tuple(frame.columns))
