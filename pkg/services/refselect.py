"""
Reference selection.

A reference set is scored by L(R|k) = [sum_{i != j} d(o_i, o_j)] * [sum_i var(o_i)]^lambda,
where var(o_i) is the population variance of the distances from o_i to the
training objects that are not references. Both modalities share one
reference set; each modality's score is divided by a normalizer before the
two are summed.
"""

import itertools
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial.distance import cdist

from config.settings import (
    BRUTEFORCE_LIMIT,
    DEFAULT_LAMBDA,
    LOCAL_SEARCH_SWEEPS,
    SELECTORS,
)
from .data import ModalityDataset, Pair, SpaceKind
from utils.errors import (
    EmptyInputError,
    InputFileError,
    InvalidArgumentError,
    ParseError,
    TooLargeError,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


@dataclass(frozen=True)
class ReferenceSet:
    """Ordered matched pairs acting as the shared coordinate frame."""
    pairs: Tuple[Pair, ...]
    lam: float
    objective_value: float
    method: str = "greedy"

    def __post_init__(self):
        pairs = tuple((int(a), int(b)) for a, b in self.pairs)
        if not pairs:
            raise InvalidArgumentError("a reference set needs at least one pair")
        if len(set(pairs)) != len(pairs):
            raise InvalidArgumentError("reference pairs are not distinct")
        if not self.lam > 0:
            raise InvalidArgumentError(f"lambda must be > 0, got {self.lam}")
        object.__setattr__(self, "pairs", pairs)

    @property
    def k(self) -> int:
        return len(self.pairs)

    @property
    def indices_a(self) -> List[int]:
        return [a for a, _ in self.pairs]

    @property
    def indices_b(self) -> List[int]:
        return [b for _, b in self.pairs]


def _distance_matrix(data: ModalityDataset, indices: Sequence[int]) -> np.ndarray:
    points = data.values[list(indices)]
    if data.space is SpaceKind.HAMMING:
        return np.rint(cdist(points, points, metric="hamming") * points.shape[1])
    return cdist(points, points, metric="euclidean")


def _score(distances: np.ndarray, chosen: Sequence[int], lam: float) -> float:
    """L(R|k) over a precomputed distance matrix of the candidate objects."""
    chosen = list(chosen)
    rest = np.setdiff1d(np.arange(distances.shape[0]), chosen)

    spread = float(distances[np.ix_(chosen, chosen)].sum())
    if rest.size == 0:
        return 0.0
    variance = float(distances[np.ix_(chosen, rest)].var(axis=1).sum())
    if variance == 0.0:
        return 0.0
    return spread * variance ** lam


def objective(
    data: ModalityDataset,
    candidate_refs: Sequence[int],
    non_refs: Sequence[int],
    lam: float = DEFAULT_LAMBDA,
) -> float:
    """
    Score a candidate reference set within one modality.

    Args:
        data: Modality providing the native distance
        candidate_refs: At least two distinct object indices
        non_refs: At least two non-reference object indices, disjoint from
            candidate_refs; the variance of each reference's distances is
            taken over these objects
        lam: Balance factor, > 0

    Returns:
        L(R|k) >= 0; zero when the total variance vanishes
    """
    candidates = [int(i) for i in candidate_refs]
    others = [int(i) for i in non_refs]

    if len(set(candidates)) != len(candidates) or len(candidates) < 2:
        raise InvalidArgumentError("need at least two distinct candidate references")
    if len(set(others)) != len(others) or len(others) < 2:
        raise InvalidArgumentError("need at least two distinct non-reference objects")
    if set(candidates) & set(others):
        raise InvalidArgumentError("candidate and non-reference objects overlap")
    if any(not 0 <= i < data.size for i in candidates + others):
        raise InvalidArgumentError(f"object index out of range [0, {data.size})")
    if not lam > 0:
        raise InvalidArgumentError(f"lambda must be > 0, got {lam}")

    distances = _distance_matrix(data, candidates + others)
    value = _score(distances, range(len(candidates)), lam)
    if value == 0.0 and distances[: len(candidates), len(candidates):].var(axis=1).sum() == 0:
        logger.warning("Reference distances to non-references have zero variance; L = 0")
    return value


def _normalizer(distances: np.ndarray, lam: float) -> float:
    """Score of the whole candidate pool, each object's variance taken over all others."""
    n = distances.shape[0]
    if n < 2:
        return 1.0
    off_diagonal = distances[~np.eye(n, dtype=bool)].reshape(n, n - 1)
    value = float(distances.sum()) * float(off_diagonal.var(axis=1).sum()) ** lam
    return value if value > 0 else 1.0


class _PairScorer:
    """Combined bi-modal score of subsets of the training pairs."""

    def __init__(
        self,
        data_a: ModalityDataset,
        data_b: ModalityDataset,
        train_pairs: Sequence[Pair],
        lam: float,
    ):
        if not lam > 0:
            raise InvalidArgumentError(f"lambda must be > 0, got {lam}")
        self.pairs = [(int(a), int(b)) for a, b in train_pairs]
        if not self.pairs:
            raise InvalidArgumentError("no training pairs to select from")
        if len(set(self.pairs)) != len(self.pairs):
            raise InvalidArgumentError("training pairs are not distinct")

        self.lam = lam
        self.dist_a = _distance_matrix(data_a, [a for a, _ in self.pairs])
        self.dist_b = _distance_matrix(data_b, [b for _, b in self.pairs])
        self.norm_a = _normalizer(self.dist_a, lam)
        self.norm_b = _normalizer(self.dist_b, lam)

    @property
    def size(self) -> int:
        return len(self.pairs)

    def score(self, chosen: Sequence[int]) -> float:
        return (
            _score(self.dist_a, chosen, self.lam) / self.norm_a
            + _score(self.dist_b, chosen, self.lam) / self.norm_b
        )

    def spread(self) -> np.ndarray:
        """Per-pair distance sum to every other pair, normalized per modality."""
        total_a = self.dist_a.sum() or 1.0
        total_b = self.dist_b.sum() or 1.0
        return self.dist_a.sum(axis=1) / total_a + self.dist_b.sum(axis=1) / total_b

    def result(self, chosen: Sequence[int], method: str) -> ReferenceSet:
        value = self.score(chosen)
        if value == 0.0 and len(chosen) < self.size:
            logger.warning(
                "Selected %d of %d pairs score 0: no spread or zero distance variance",
                len(chosen), self.size,
            )
        return ReferenceSet(
            pairs=tuple(self.pairs[i] for i in chosen),
            lam=self.lam,
            objective_value=value,
            method=method,
        )


def pair_objective(
    data_a: ModalityDataset,
    data_b: ModalityDataset,
    train_pairs: Sequence[Pair],
    chosen: Sequence[int],
    lam: float = DEFAULT_LAMBDA,
) -> float:
    """Combined normalized score of train_pairs[chosen] as the reference set."""
    return _PairScorer(data_a, data_b, train_pairs, lam).score(list(chosen))


def select_references_bruteforce(
    data_a: ModalityDataset,
    data_b: ModalityDataset,
    train_pairs: Sequence[Pair],
    k: int,
    lam: float = DEFAULT_LAMBDA,
) -> ReferenceSet:
    """
    Exhaustive search over all k-subsets of the training pairs.

    Ties keep the lexicographically smallest subset (combinations are
    enumerated in lexicographic order and only a strict improvement wins).
    """
    scorer = _PairScorer(data_a, data_b, train_pairs, lam)
    if scorer.size > BRUTEFORCE_LIMIT:
        raise TooLargeError(
            f"{scorer.size} training pairs exceed the exhaustive limit {BRUTEFORCE_LIMIT}"
        )
    if not 1 <= k <= scorer.size:
        raise InvalidArgumentError(f"k={k} outside [1, {scorer.size}]")

    best: Optional[Tuple[int, ...]] = None
    best_value = -np.inf
    for subset in itertools.combinations(range(scorer.size), k):
        value = scorer.score(subset)
        if value > best_value:
            best, best_value = subset, value

    logger.info("Exhaustive selection: k=%d, objective=%.6g", k, best_value)
    return scorer.result(best, "bruteforce")


def select_references_greedy(
    data_a: ModalityDataset,
    data_b: ModalityDataset,
    train_pairs: Sequence[Pair],
    k: int,
    lam: float = DEFAULT_LAMBDA,
    refine: bool = True,
    max_sweeps: int = LOCAL_SEARCH_SWEEPS,
) -> ReferenceSet:
    """
    Greedy forward selection with optional swap refinement.

    Starts from the pair farthest from all others, adds the pair that
    maximizes the combined objective until k pairs are chosen, then swaps
    one chosen pair for one unchosen pair while that strictly improves the
    objective.
    """
    scorer = _PairScorer(data_a, data_b, train_pairs, lam)
    if not 2 <= k <= scorer.size:
        raise InvalidArgumentError(f"k={k} outside [2, {scorer.size}]")

    if k == scorer.size:
        return scorer.result(list(range(k)), "greedy")

    chosen = [int(np.argmax(scorer.spread()))]
    while len(chosen) < k:
        candidates = [i for i in range(scorer.size) if i not in chosen]
        values = [scorer.score(chosen + [c]) for c in candidates]
        chosen.append(candidates[int(np.argmax(values))])

    if refine:
        chosen = _local_search(scorer, chosen, max_sweeps)

    result = scorer.result(sorted(chosen), "greedy")
    logger.info("Greedy selection: k=%d, objective=%.6g", k, result.objective_value)
    return result


def _local_search(scorer: _PairScorer, chosen: List[int], max_sweeps: int) -> List[int]:
    current = scorer.score(chosen)
    for _ in range(max_sweeps):
        best_swap = None
        best_value = current
        outside = [i for i in range(scorer.size) if i not in chosen]
        for position in range(len(chosen)):
            for candidate in outside:
                trial = chosen[:position] + [candidate] + chosen[position + 1:]
                value = scorer.score(trial)
                if value > best_value:
                    best_swap, best_value = (position, candidate), value
        if best_swap is None:
            break
        position, candidate = best_swap
        chosen = chosen[:position] + [candidate] + chosen[position + 1:]
        current = best_value
    return chosen


def select_references(
    data_a: ModalityDataset,
    data_b: ModalityDataset,
    train_pairs: Sequence[Pair],
    k: int,
    lam: float = DEFAULT_LAMBDA,
    method: str = "greedy",
) -> ReferenceSet:
    """Dispatch to the greedy or exhaustive selector."""
    if method not in SELECTORS:
        raise InvalidArgumentError(f"unknown selector {method!r}, expected one of {SELECTORS}")
    if method == "bruteforce":
        return select_references_bruteforce(data_a, data_b, train_pairs, k, lam)
    return select_references_greedy(data_a, data_b, train_pairs, k, lam)


def write_reference_set(refs: ReferenceSet, path: PathLike) -> None:
    """Write 'indexA,indexB' lines under a header comment."""
    lines = [
        f"# k={refs.k} lambda={refs.lam!r} objective_value={refs.objective_value!r} "
        f"method={refs.method}"
    ]
    lines += [f"{a},{b}" for a, b in refs.pairs]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_reference_set(path: PathLike) -> ReferenceSet:
    """Load a reference set written by write_reference_set."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except (OSError, UnicodeDecodeError) as e:
        raise InputFileError(f"cannot read {path}: {e}") from e

    header = {}
    pairs = []
    for number, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            for token in line[1:].split():
                key, _, value = token.partition("=")
                header[key] = value
            continue
        fields = line.split(",")
        try:
            pairs.append((int(fields[0]), int(fields[1])))
        except (ValueError, IndexError):
            raise ParseError(f"expected 'indexA,indexB', got {line!r}", str(path), number) from None

    if not pairs:
        raise EmptyInputError(f"{path}: no reference pairs")

    try:
        lam = float(header.get("lambda", DEFAULT_LAMBDA))
        value = float(header.get("objective_value", "nan"))
    except ValueError:
        raise ParseError("malformed header", str(path), 1) from None

    return ReferenceSet(tuple(pairs), lam, value, header.get("method", "greedy"))
