"""
Correlation between the similarity matrices of two modalities.

If Y = XM with X standard normal, the inner-product similarities
S_X(i, j) = x_i . x_j and S_Y(i, j) = y_i . y_j are positively correlated,
with Pearson coefficient tr(MM^T) / sqrt(d * ||MM^T||_F^2). The same sign
holds empirically when Y = sigmoid(XM + B).
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy.special import expit
from scipy.stats import pearsonr

from config.settings import MIN_CORRELATION_N, REPORT_FLOAT_FORMAT
from .data import FeatureMatrix
from utils.errors import DegenerateInputError, DimensionMismatchError, InvalidArgumentError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

SYMMETRY_TOLERANCE = 1e-9
FORM_TOLERANCE = 1e-10


class MappingKind(str, Enum):
    """How the second modality is generated from the first."""
    LINEAR = "linear"
    SIGMOID = "sigmoid"

    @classmethod
    def parse(cls, value: Union[str, "MappingKind"]) -> "MappingKind":
        try:
            return cls(value)
        except ValueError:
            raise InvalidArgumentError(f"unknown mapping: {value!r}") from None


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric n x n inner-product similarities."""
    values: np.ndarray
    kind: str = "inner_product"

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise DimensionMismatchError(f"similarity matrix must be square, got {values.shape}")
        if not np.allclose(values, values.T, rtol=0.0, atol=SYMMETRY_TOLERANCE * max(1.0, np.abs(values).max())):
            raise InvalidArgumentError("similarity matrix is not symmetric")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class CorrelationReport:
    """Per-trial empirical correlations and their summary."""
    trials: int
    empirical_rho_per_trial: List[float]
    fraction_positive: float
    mapping_kind: MappingKind
    analytic_rho: Optional[float] = None
    analytic_rho_per_trial: List[float] = field(default_factory=list)

    @property
    def mean_rho(self) -> float:
        return float(np.mean(self.empirical_rho_per_trial))

    def summary_line(self) -> str:
        line = f"fraction_positive={self.fraction_positive:.4f}"
        if self.analytic_rho is not None:
            line += f", analytic_rho={self.analytic_rho:.6f}"
        return line


def inner_product_similarity(features: Union[FeatureMatrix, np.ndarray]) -> SimilarityMatrix:
    """S(i, j) = row_i . row_j."""
    values = features.values if isinstance(features, FeatureMatrix) else np.asarray(features, dtype=float)
    if values.ndim != 2 or values.shape[0] < 2:
        raise InvalidArgumentError("need at least two rows for a similarity matrix")
    gram = values @ values.T
    return SimilarityMatrix((gram + gram.T) / 2)


def empirical_pearson(sx: SimilarityMatrix, sy: SimilarityMatrix) -> float:
    """Pearson coefficient over the strictly upper-triangular entries (i < j)."""
    if sx.n != sy.n:
        raise DimensionMismatchError(f"similarity matrices of size {sx.n} and {sy.n}")
    upper = np.triu_indices(sx.n, k=1)
    a = sx.values[upper]
    b = sy.values[upper]
    if a.size < 2 or np.ptp(a) == 0 or np.ptp(b) == 0:
        raise DegenerateInputError("a similarity sample has zero variance")
    rho, _ = pearsonr(a, b)
    return float(np.clip(rho, -1.0, 1.0))


def _gram(m: np.ndarray) -> np.ndarray:
    m = np.atleast_2d(np.asarray(m, dtype=float))
    if not np.any(m):
        raise DegenerateInputError("M is a zero matrix")
    return m @ m.T


def analytic_rho_closed_form(m: np.ndarray) -> float:
    """tr(MM^T) / sqrt(d * ||MM^T||_F^2)."""
    a = _gram(m)
    d = a.shape[0]
    return float(np.trace(a) / np.sqrt(d * np.sum(a ** 2)))


def analytic_rho(m: np.ndarray) -> float:
    """
    Predicted correlation of S_X and S_Y for Y = XM, X standard normal.

    Evaluated through the eigendecomposition MM^T = P diag(lam) P^T:
    numerator sum_g lam_g sum_f p_gf^2, denominator
    sqrt(d * sum_{u,v} (sum_g lam_g p_gu p_gv)^2). The result is
    cross-checked against the trace/Frobenius form.
    """
    a = _gram(m)
    d = a.shape[0]
    eigenvalues, p = np.linalg.eigh(a)
    # p[:, g] is the g-th eigenvector; the per-eigenvector rows below are p_g
    rows = p.T
    numerator = float(np.sum(eigenvalues * np.sum(rows ** 2, axis=1)))
    reconstructed = np.einsum("g,gu,gv->uv", eigenvalues, rows, rows)
    rho = numerator / np.sqrt(d * np.sum(reconstructed ** 2))

    closed = analytic_rho_closed_form(m)
    if abs(rho - closed) > FORM_TOLERANCE * max(1.0, abs(closed)):
        logger.warning("Eigen form %.12g disagrees with closed form %.12g", rho, closed)
    return float(rho)


def _generate(
    rng: np.random.Generator,
    n: int,
    d: int,
    e: int,
    mapping: MappingKind,
    fixed_m: Optional[np.ndarray],
):
    x = rng.standard_normal((n, d))
    m = fixed_m if fixed_m is not None else rng.standard_normal((d, e))
    if mapping is MappingKind.LINEAR:
        return x, x @ m, m
    bias = rng.standard_normal((1, m.shape[1]))
    return x, expit(x @ m + bias), m


def monte_carlo_verify(
    n: int,
    d: int,
    e: int,
    trials: int,
    mapping: Union[str, MappingKind] = MappingKind.LINEAR,
    seed: int = 1,
    fixed_m: Optional[np.ndarray] = None,
) -> CorrelationReport:
    """
    Sample X ~ N(0,1)^{n x d} per trial, map it to Y and record corr(S_X, S_Y).

    Trial t uses the generator seeded with seed + t, so trials are
    independent and reproducible. For the linear mapping the analytic
    value of each trial's M is attached; the report's analytic_rho is their
    mean (exactly the value of M when M is fixed).

    Args:
        n: Objects per trial, >= 10
        d: Dimension of X
        e: Dimension of Y (ignored when fixed_m is given)
        trials: Number of trials, >= 1
        mapping: 'linear' (Y = XM) or 'sigmoid' (Y = sigmoid(XM + B))
        seed: Base seed
        fixed_m: Optional d x e matrix reused by every trial

    Returns:
        CorrelationReport
    """
    mapping = MappingKind.parse(mapping)
    if n < MIN_CORRELATION_N:
        raise InvalidArgumentError(f"n must be >= {MIN_CORRELATION_N}, got {n}")
    if trials < 1:
        raise InvalidArgumentError(f"trials must be >= 1, got {trials}")
    if d < 1 or e < 1:
        raise InvalidArgumentError(f"dimensions must be positive, got d={d}, e={e}")
    if fixed_m is not None:
        fixed_m = np.atleast_2d(np.asarray(fixed_m, dtype=float))
        if fixed_m.shape[0] != d:
            raise DimensionMismatchError(f"M has {fixed_m.shape[0]} rows, expected d={d}")

    rhos = []
    analytic = []
    for trial in range(trials):
        rng = np.random.default_rng(seed + trial)
        x, y, m = _generate(rng, n, d, e, mapping, fixed_m)
        rhos.append(empirical_pearson(inner_product_similarity(x), inner_product_similarity(y)))
        if mapping is MappingKind.LINEAR:
            analytic.append(analytic_rho(m))

    fraction = float(np.mean(np.asarray(rhos) > 0))
    report = CorrelationReport(
        trials=trials,
        empirical_rho_per_trial=rhos,
        fraction_positive=fraction,
        mapping_kind=mapping,
        analytic_rho=float(np.mean(analytic)) if analytic else None,
        analytic_rho_per_trial=analytic,
    )
    logger.info("Correlation check (%s): %s", mapping.value, report.summary_line())
    return report


def convergence_gaps(
    m: np.ndarray,
    sizes: Sequence[int],
    trials: int = 20,
    seed: int = 0,
) -> Dict[int, float]:
    """
    Median |empirical rho - analytic rho| over trials, per sample size.

    For a fixed linear M the gap shrinks as n grows.
    """
    m = np.atleast_2d(np.asarray(m, dtype=float))
    target = analytic_rho(m)
    gaps = {}
    for n in sizes:
        report = monte_carlo_verify(n, m.shape[0], m.shape[1], trials, MappingKind.LINEAR, seed, m)
        gaps[int(n)] = float(np.median(np.abs(np.asarray(report.empirical_rho_per_trial) - target)))
    return gaps


def write_correlation_report(report: CorrelationReport, path: PathLike) -> None:
    """One row per trial, then a summary row."""
    frame = pd.DataFrame({
        "record": "trial",
        "trial": range(report.trials),
        "empirical_rho": report.empirical_rho_per_trial,
        "fraction_positive": np.nan,
        "analytic_rho": np.nan,
    })
    summary = pd.DataFrame([{
        "record": "summary",
        "trial": np.nan,
        "empirical_rho": report.mean_rho,
        "fraction_positive": report.fraction_positive,
        "analytic_rho": report.analytic_rho if report.analytic_rho is not None else np.nan,
    }])
    combined = pd.concat([frame, summary], ignore_index=True)
    combined["trial"] = combined["trial"].astype("Int64")
    combined.to_csv(path, index=False, float_format=REPORT_FLOAT_FORMAT)
