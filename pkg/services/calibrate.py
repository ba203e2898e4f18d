"""Per-dimension affine calibration between structure spaces and cross-modal matching."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from config.settings import DEFAULT_GAMMA, FLOAT_FORMAT
from .data import SpaceKind
from utils.errors import (
    DimensionMismatchError,
    EmptyInputError,
    InputFileError,
    InvalidArgumentError,
    ParseError,
)
from .structure import StructureMatrix, StructureMetric, pairwise_structure_distances

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class Direction(str, Enum):
    """Which structure space is mapped onto the other."""
    A_TO_B = "a_to_b"
    B_TO_A = "b_to_a"

    @classmethod
    def parse(cls, value: Union[str, "Direction"]) -> "Direction":
        try:
            return cls(value)
        except ValueError:
            raise InvalidArgumentError(f"unknown direction: {value!r}") from None

    @property
    def reverse(self) -> "Direction":
        return Direction.B_TO_A if self is Direction.A_TO_B else Direction.A_TO_B


@dataclass(frozen=True)
class CalibrationModel:
    """Diagonal scale and per-column bias mapping one structure space onto the other."""
    scale: np.ndarray
    bias: np.ndarray
    gamma: float = DEFAULT_GAMMA
    direction: Direction = Direction.B_TO_A
    degenerate_dims: Tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        scale = np.array(self.scale, dtype=float, copy=True).ravel()
        bias = np.array(self.bias, dtype=float, copy=True).ravel()
        if scale.shape != bias.shape or scale.size == 0:
            raise DimensionMismatchError(
                f"scale has {scale.size} entries, bias {bias.size}"
            )
        if not (np.all(np.isfinite(scale)) and np.all(np.isfinite(bias))):
            raise InvalidArgumentError("calibration parameters must be finite")
        if self.gamma < 0:
            raise InvalidArgumentError(f"gamma must be >= 0, got {self.gamma}")
        scale.setflags(write=False)
        bias.setflags(write=False)
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "bias", bias)
        object.__setattr__(self, "direction", Direction.parse(self.direction))
        object.__setattr__(self, "degenerate_dims", tuple(int(j) for j in self.degenerate_dims))

    @property
    def k(self) -> int:
        return self.scale.size

    @classmethod
    def identity(cls, k: int, direction: Union[str, Direction] = Direction.B_TO_A) -> "CalibrationModel":
        return cls(np.ones(k), np.zeros(k), 0.0, Direction.parse(direction))


@dataclass(frozen=True)
class RankedMatches:
    """All targets of one query, nearest first."""
    query_index: int
    ranked: Tuple[Tuple[int, float], ...]
    zero_rows: bool = False

    @property
    def target_indices(self) -> List[int]:
        return [t for t, _ in self.ranked]


def _as_array(rows: Union[StructureMatrix, np.ndarray]) -> np.ndarray:
    if isinstance(rows, StructureMatrix):
        return rows.values
    return np.atleast_2d(np.asarray(rows, dtype=float))


def fit_calibration(
    src_refs: Union[StructureMatrix, np.ndarray],
    dst_refs: Union[StructureMatrix, np.ndarray],
    gamma: float = DEFAULT_GAMMA,
    direction: Union[str, Direction] = Direction.B_TO_A,
) -> CalibrationModel:
    """
    Fit scale_j, bias_j for every structure dimension independently.

    Minimizes sum_i (scale_j * src_ij + bias_j - dst_ij)^2 + gamma * scale_j^2
    over the reference rows; the bias is not penalized, so the solution is
    the ridge slope on centered data.

    Args:
        src_refs: Structure rows of the references in the source space (k x k)
        dst_refs: Structure rows of the same references in the target space
        gamma: Ridge coefficient on the slope, >= 0
        direction: Recorded on the model

    Returns:
        CalibrationModel; dimensions with a constant source column and
        gamma = 0 get scale 0 and bias = mean of the target column
    """
    src = _as_array(src_refs)
    dst = _as_array(dst_refs)
    if src.shape != dst.shape:
        raise DimensionMismatchError(f"source {src.shape} and target {dst.shape} differ")
    if src.shape[0] < 1:
        raise InvalidArgumentError("no reference rows to fit on")
    if gamma < 0:
        raise InvalidArgumentError(f"gamma must be >= 0, got {gamma}")

    src_mean = src.mean(axis=0)
    dst_mean = dst.mean(axis=0)
    src_centered = src - src_mean
    sxx = np.sum(src_centered ** 2, axis=0)
    sxy = np.sum(src_centered * (dst - dst_mean), axis=0)

    denominator = sxx + gamma
    degenerate = denominator == 0
    scale = np.divide(sxy, denominator, out=np.zeros_like(sxy), where=~degenerate)
    bias = dst_mean - scale * src_mean

    degenerate_dims = tuple(int(j) for j in np.flatnonzero(degenerate))
    if degenerate_dims:
        logger.warning(
            "Constant source column in %d dimension(s) %s; scale set to 0",
            len(degenerate_dims), list(degenerate_dims),
        )

    return CalibrationModel(scale, bias, gamma, Direction.parse(direction), degenerate_dims)


def apply_calibration(model: CalibrationModel, s: StructureMatrix) -> StructureMatrix:
    """Map every row r to scale * r + bias; the result lives in the calibrated space."""
    if s.refs != model.k:
        raise DimensionMismatchError(f"model has {model.k} dims, structure {s.refs}")
    return StructureMatrix(
        s.values * model.scale + model.bias,
        SpaceKind.CALIBRATED,
        s.ref_ids,
        s.row_ids,
        s.condition,
    )


def residuals(
    model: CalibrationModel,
    src_refs: Union[StructureMatrix, np.ndarray],
    dst_refs: Union[StructureMatrix, np.ndarray],
) -> np.ndarray:
    """Fitted minus observed target values on the reference rows."""
    src = _as_array(src_refs)
    dst = _as_array(dst_refs)
    return src * model.scale + model.bias - dst


def match(
    query_rows: StructureMatrix,
    target_rows: StructureMatrix,
    model: CalibrationModel,
    metric: Union[str, StructureMetric] = StructureMetric.COSINE,
    query_indices: Optional[Sequence[int]] = None,
    target_indices: Optional[Sequence[int]] = None,
) -> List[RankedMatches]:
    """
    Rank every target for every calibrated query.

    Args:
        query_rows: Structure rows in the model's source space
        target_rows: Structure rows in the model's target space
        model: Calibration from query space onto target space
        metric: Structure-space distance
        query_indices: Dataset indices reported for the queries (default 0..q-1)
        target_indices: Dataset indices reported for the targets (default 0..t-1)

    Returns:
        One RankedMatches per query, distances ascending, ties by target index
    """
    if query_rows.refs != target_rows.refs:
        raise DimensionMismatchError(
            f"queries have {query_rows.refs} dims, targets {target_rows.refs}"
        )

    query_indices = list(range(query_rows.rows)) if query_indices is None else list(query_indices)
    target_indices = list(range(target_rows.rows)) if target_indices is None else list(target_indices)
    if len(query_indices) != query_rows.rows or len(target_indices) != target_rows.rows:
        raise DimensionMismatchError("index lists do not match the structure rows")

    calibrated = apply_calibration(model, query_rows)
    distances, zero_mask = pairwise_structure_distances(
        calibrated.values, target_rows.values, metric
    )
    if zero_mask.any():
        logger.warning(
            "%d query/target pairs involve a zero row; distance set to maximum",
            int(zero_mask.sum()),
        )

    targets = np.asarray(target_indices)
    results = []
    for q, query_index in enumerate(query_indices):
        order = np.lexsort((targets, distances[q]))
        ranked = tuple((int(targets[t]), float(distances[q, t])) for t in order)
        results.append(RankedMatches(int(query_index), ranked, bool(zero_mask[q].any())))

    logger.debug("Ranked %d queries against %d targets", len(results), len(targets))
    return results


def write_calibration(model: CalibrationModel, path: PathLike) -> None:
    """Write a header line with k, gamma and direction, then k 'scale,bias' lines."""
    header = f"# k={model.k} gamma={model.gamma!r} direction={model.direction.value}\n"
    frame = pd.DataFrame({"scale": model.scale, "bias": model.bias})
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(header)
        frame.to_csv(handle, header=False, index=False, float_format=FLOAT_FORMAT)


def load_calibration(path: PathLike) -> CalibrationModel:
    """Load a model written by write_calibration."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except (OSError, UnicodeDecodeError) as e:
        raise InputFileError(f"cannot read {path}: {e}") from e
    if not lines or not lines[0].startswith("#"):
        raise ParseError("missing header line", str(path), 1)

    header = dict(token.partition("=")[::2] for token in lines[0][1:].split())
    scale, bias = [], []
    for number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            s, b = (float(v) for v in line.split(","))
        except ValueError:
            raise ParseError(f"expected 'scale,bias', got {line!r}", str(path), number) from None
        scale.append(s)
        bias.append(b)

    if not scale:
        raise EmptyInputError(f"{path}: no calibration rows")
    if "k" in header and int(header["k"]) != len(scale):
        raise ParseError(f"header says k={header['k']} but {len(scale)} rows", str(path), 1)

    return CalibrationModel(
        np.array(scale),
        np.array(bias),
        float(header.get("gamma", DEFAULT_GAMMA)),
        Direction.parse(header.get("direction", Direction.B_TO_A.value)),
    )


def write_rankings(rankings: Sequence[RankedMatches], path: PathLike) -> None:
    """Write rankings as csv rows (query_index, rank, target_index, distance)."""
    records = [
        {"query_index": r.query_index, "rank": rank, "target_index": t, "distance": d}
        for r in rankings
        for rank, (t, d) in enumerate(r.ranked, start=1)
    ]
    frame = pd.DataFrame(records, columns=["query_index", "rank", "target_index", "distance"])
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
