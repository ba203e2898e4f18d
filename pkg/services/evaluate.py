"""Retrieval evaluation and the train-size sweep experiment."""

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from config.loader import parse_float, parse_int, parse_int_list
from config.settings import (
    DEFAULT_DIRECTION,
    DEFAULT_GAMMA,
    DEFAULT_LAMBDA,
    DEFAULT_METRIC,
    DEFAULT_REFERENCES,
    DEFAULT_SEEDS,
    DEFAULT_SELECTOR,
    DEFAULT_TRAIN_SIZES,
    DIRECTIONS,
    FEATURE_DELIMITERS,
    METHOD_TAG,
    METRICS,
    MIN_TRAIN_SIZE,
    REPORT_FLOAT_FORMAT,
    SELECTORS,
    SPACE_KINDS,
    SYNTHETIC_DEFAULTS,
)
from utils.errors import (
    ConfigError,
    EmptyInputError,
    ExperimentError,
    StructureMatchError,
)
from .calibrate import CalibrationModel, Direction, apply_calibration, fit_calibration, match
from .data import PairedCorpus, load_corpus, split_corpus
from .refselect import ReferenceSet, select_references
from .structure import StructureMatrix, StructureMetric, build_structure
from .synthetic import make_synthetic_corpus

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

REPORT_COLUMNS = ["method", "direction", "train_size", "seed", "map", "baseline", "status"]
SUMMARY_COLUMNS = ["method", "direction", "train_size", "map_mean", "map_std"]

# Query modality -> target modality
QUERY_DIRECTIONS = ("a_to_b", "b_to_a")


def average_precision(ranked_target_labels: Sequence[str], query_label: str) -> float:
    """
    Average precision of one ranked list over the full ranking.

    AP = (1/L) * sum_k P(k) * rel(k), where L is the number of targets
    sharing the query label and P(k) the precision of the top k.
    Returns 0.0 when no target is relevant.
    """
    relevant = np.asarray([label == query_label for label in ranked_target_labels], dtype=bool)
    total = int(relevant.sum())
    if total == 0:
        logger.debug("No relevant target for label %r; AP = 0", query_label)
        return 0.0

    hits = np.cumsum(relevant)
    ranks = np.arange(1, relevant.size + 1)
    return float(np.sum(hits[relevant] / ranks[relevant]) / total)


def mean_average_precision(aps: Sequence[float]) -> float:
    """Arithmetic mean of per-query average precisions."""
    if len(aps) == 0:
        raise EmptyInputError("no average precisions to average")
    return float(np.mean(aps))


def random_baseline_ap(n_targets: int, n_relevant: int) -> float:
    """
    Expected AP of a uniformly random ranking of n_targets items, n_relevant relevant.

    E[AP] = (1/N) * [H_N + (L - 1)/(N - 1) * (N - H_N)], H_N the N-th harmonic number.
    """
    if n_relevant <= 0 or n_targets <= 0:
        return 0.0
    if n_targets == 1:
        return 1.0
    harmonic = float(np.sum(1.0 / np.arange(1, n_targets + 1)))
    ratio = (n_relevant - 1) / (n_targets - 1)
    return (harmonic + ratio * (n_targets - harmonic)) / n_targets


def random_baseline_map(query_labels: Sequence[str], target_labels: Sequence[str]) -> float:
    """Label-frequency random baseline: mean expected AP over the queries."""
    counts = pd.Series(list(target_labels)).value_counts()
    n_targets = len(target_labels)
    return mean_average_precision([
        random_baseline_ap(n_targets, int(counts.get(label, 0))) for label in query_labels
    ])


@dataclass
class ExperimentConfig:
    """Corpus source, protocol grid and method knobs of one experiment."""
    corpus: str = "synthetic"
    features_a: Optional[str] = None
    labels_a: Optional[str] = None
    features_b: Optional[str] = None
    labels_b: Optional[str] = None
    pairs: Optional[str] = None
    space_a: str = "euclidean"
    space_b: str = "euclidean"
    fmt: str = "csv"
    synthetic: Dict[str, int] = field(default_factory=lambda: dict(SYNTHETIC_DEFAULTS))
    train_sizes: List[int] = field(default_factory=lambda: list(DEFAULT_TRAIN_SIZES))
    seeds: List[int] = field(default_factory=lambda: list(DEFAULT_SEEDS))
    references: Optional[int] = DEFAULT_REFERENCES  # None: every training pair
    selector: str = DEFAULT_SELECTOR
    lam: float = DEFAULT_LAMBDA
    gamma: float = DEFAULT_GAMMA
    metric: str = DEFAULT_METRIC
    direction: str = DEFAULT_DIRECTION
    output: Optional[str] = None

    def validate(self) -> "ExperimentConfig":
        """Check every field; raises ConfigError naming the first bad one."""
        if self.corpus not in ("synthetic", "files"):
            raise ConfigError("corpus", f"expected 'synthetic' or 'files', got {self.corpus!r}")
        if self.corpus == "files":
            for name in ("features_a", "labels_a", "features_b", "labels_b", "pairs"):
                if not getattr(self, name):
                    raise ConfigError(name, "required when corpus = files")
        for name in ("space_a", "space_b"):
            if getattr(self, name) not in SPACE_KINDS:
                raise ConfigError(name, f"expected one of {SPACE_KINDS}")
        if self.fmt not in FEATURE_DELIMITERS:
            raise ConfigError("format", f"expected one of {sorted(FEATURE_DELIMITERS)}")
        if not self.train_sizes:
            raise ConfigError("train_sizes", "must not be empty")
        if min(self.train_sizes) < MIN_TRAIN_SIZE:
            raise ConfigError("train_sizes", f"every size must be >= {MIN_TRAIN_SIZE}")
        if not self.seeds:
            raise ConfigError("seeds", "must not be empty")
        if self.references is not None and self.references < 2:
            raise ConfigError("references", "must be >= 2 or 'all'")
        if self.selector not in SELECTORS:
            raise ConfigError("selector", f"expected one of {SELECTORS}")
        if not self.lam > 0:
            raise ConfigError("lambda", f"must be > 0, got {self.lam}")
        if self.gamma < 0:
            raise ConfigError("gamma", f"must be >= 0, got {self.gamma}")
        if self.metric not in METRICS:
            raise ConfigError("metric", f"expected one of {METRICS}")
        if self.direction not in DIRECTIONS:
            raise ConfigError("direction", f"expected one of {DIRECTIONS}")
        return self

    @classmethod
    def from_mapping(cls, values: Mapping[str, str]) -> "ExperimentConfig":
        """Build a config from parsed key=value pairs; unknown keys are rejected."""
        cfg = cls()
        synthetic = dict(SYNTHETIC_DEFAULTS)

        for key, value in values.items():
            if key in ("corpus", "features_a", "labels_a", "features_b", "labels_b",
                       "pairs", "space_a", "space_b", "selector", "metric",
                       "direction", "output"):
                setattr(cfg, key, str(value))
            elif key == "format":
                cfg.fmt = str(value)
            elif key in ("train_sizes", "seeds"):
                setattr(cfg, key, parse_int_list(key, value))
            elif key == "references":
                cfg.references = None if str(value) == "all" else parse_int(key, value)
            elif key == "lambda":
                cfg.lam = parse_float(key, value)
            elif key == "gamma":
                cfg.gamma = parse_float(key, value)
            elif key.startswith("synthetic_") and key[len("synthetic_"):] in synthetic:
                synthetic[key[len("synthetic_"):]] = parse_int(key, value)
            else:
                raise ConfigError(key, "unknown configuration key")

        cfg.synthetic = synthetic
        return cfg.validate()


def summarize_report(frame: pd.DataFrame) -> pd.DataFrame:
    """Mean and population standard deviation of mAP over seeds, 'ok' rows only."""
    frame = frame[frame["status"] == "ok"]
    if frame.empty:
        return pd.DataFrame(columns=SUMMARY_COLUMNS)
    grouped = frame.groupby(["method", "direction", "train_size"], sort=True)["map"]
    summary = grouped.agg(map_mean="mean", map_std=lambda s: float(np.std(s, ddof=0)))
    return summary.reset_index()[SUMMARY_COLUMNS]


@dataclass
class ExperimentReport:
    """Per-cell mAP records, the reference set of each cell and their aggregate."""
    records: List[Dict] = field(default_factory=list)
    references: Dict[Tuple[int, int], ReferenceSet] = field(default_factory=dict)
    method: str = METHOD_TAG
    elapsed: float = 0.0

    def frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.records, columns=REPORT_COLUMNS)
        return frame.sort_values(
            ["train_size", "seed", "direction"], kind="stable"
        ).reset_index(drop=True)

    def summary(self) -> pd.DataFrame:
        return summarize_report(self.frame())


def load_experiment_corpus(cfg: ExperimentConfig) -> PairedCorpus:
    """Load the corpus a config points at, or generate the synthetic one."""
    if cfg.corpus == "synthetic":
        return make_synthetic_corpus(**cfg.synthetic)
    return load_corpus(
        cfg.features_a, cfg.labels_a,
        cfg.features_b, cfg.labels_b,
        cfg.pairs,
        cfg.space_a, cfg.space_b,
        cfg.fmt,
    )


def _rank(
    query_rows: StructureMatrix,
    target_rows: StructureMatrix,
    model: CalibrationModel,
    query_is_source: bool,
    metric: StructureMetric,
    query_indices: Sequence[int],
    target_indices: Sequence[int],
):
    """Compare queries and targets in the model's target space."""
    if query_is_source:
        return match(query_rows, target_rows, model, metric, query_indices, target_indices)
    calibrated_targets = apply_calibration(model, target_rows)
    identity = CalibrationModel.identity(model.k, model.direction.reverse)
    return match(query_rows, calibrated_targets, identity, metric, query_indices, target_indices)


def evaluate_rankings(rankings, query_labels: Sequence[str], target_labels: Sequence[str]) -> float:
    """
    mAP of rankings whose query/target indices address the given label lists.

    Queries whose label no target shares score AP = 0; their count is
    logged as a warning.
    """
    target_set = set(target_labels)
    aps = []
    unmatched = 0
    for ranking in rankings:
        label = query_labels[ranking.query_index]
        unmatched += label not in target_set
        aps.append(average_precision([target_labels[t] for t in ranking.target_indices], label))
    if unmatched:
        logger.warning("%d of %d queries have no relevant target (AP = 0)", unmatched, len(aps))
    return mean_average_precision(aps)


def run_cell(
    corpus: PairedCorpus,
    cfg: ExperimentConfig,
    train_size: int,
    seed: int,
) -> Tuple[List[Dict], Optional[ReferenceSet]]:
    """
    Split, select references, build structures, calibrate and score one cell.

    Returns:
        Report records for both query directions and their average, plus
        the selected reference set (None when the split leaves no test objects)
    """
    split = split_corpus(corpus, train_size, seed)
    base = {"method": METHOD_TAG, "train_size": train_size, "seed": seed}

    if split.empty_test:
        logger.warning("train_size=%d, seed=%d leaves no test objects", train_size, seed)
        return [
            {**base, "direction": d, "map": np.nan, "baseline": np.nan, "status": "empty_test"}
            for d in QUERY_DIRECTIONS + ("average",)
        ], None

    k = train_size if cfg.references is None else max(2, min(cfg.references, train_size))
    refs = select_references(
        corpus.mod_a, corpus.mod_b, split.train_pairs, k, cfg.lam, cfg.selector
    )

    struct_a = build_structure(corpus.mod_a, refs.indices_a)
    struct_b = build_structure(corpus.mod_b, refs.indices_b)

    direction = Direction.parse(cfg.direction)
    if direction is Direction.A_TO_B:
        src, dst = struct_a.take(refs.indices_a), struct_b.take(refs.indices_b)
    else:
        src, dst = struct_b.take(refs.indices_b), struct_a.take(refs.indices_a)
    model = fit_calibration(src, dst, cfg.gamma, direction)

    metric = StructureMetric.parse(cfg.metric)
    test_a = struct_a.take(split.test_indices_a)
    test_b = struct_b.take(split.test_indices_b)
    labels_a = [corpus.mod_a.labels[i] for i in split.test_indices_a]
    labels_b = [corpus.mod_b.labels[i] for i in split.test_indices_b]
    positions_a = range(len(split.test_indices_a))
    positions_b = range(len(split.test_indices_b))

    scores = {
        "a_to_b": evaluate_rankings(
            _rank(test_a, test_b, model, direction is Direction.A_TO_B, metric,
                  positions_a, positions_b),
            labels_a, labels_b,
        ),
        "b_to_a": evaluate_rankings(
            _rank(test_b, test_a, model, direction is Direction.B_TO_A, metric,
                  positions_b, positions_a),
            labels_b, labels_a,
        ),
    }
    baselines = {
        "a_to_b": random_baseline_map(labels_a, labels_b),
        "b_to_a": random_baseline_map(labels_b, labels_a),
    }
    scores["average"] = (scores["a_to_b"] + scores["b_to_a"]) / 2
    baselines["average"] = (baselines["a_to_b"] + baselines["b_to_a"]) / 2

    logger.info(
        "train_size=%d seed=%d k=%d: mAP a_to_b=%.4f b_to_a=%.4f",
        train_size, seed, refs.k, scores["a_to_b"], scores["b_to_a"],
    )
    return [
        {**base, "direction": d, "map": scores[d], "baseline": baselines[d], "status": "ok"}
        for d in QUERY_DIRECTIONS + ("average",)
    ], refs


def check_train_sizes(cfg: ExperimentConfig, corpus: PairedCorpus) -> None:
    """Every train size must fit in the corpus's pairs."""
    too_large = [t for t in cfg.train_sizes if t > len(corpus.pairs)]
    if too_large:
        raise ConfigError(
            "train_sizes",
            f"{too_large} exceed the number of pairs ({len(corpus.pairs)})",
        )


def run_experiment(
    cfg: ExperimentConfig,
    corpus: Optional[PairedCorpus] = None,
) -> ExperimentReport:
    """
    Run every (train_size, seed) cell of the sweep.

    Args:
        cfg: Validated experiment configuration
        corpus: Preloaded corpus (default: loaded from cfg)

    Returns:
        ExperimentReport; written to cfg.output when set
    """
    cfg.validate()
    started = time.perf_counter()
    if corpus is None:
        corpus = load_experiment_corpus(cfg)
    check_train_sizes(cfg, corpus)

    report = ExperimentReport()
    for train_size in sorted(cfg.train_sizes):
        for seed in sorted(cfg.seeds):
            try:
                records, refs = run_cell(corpus, cfg, train_size, seed)
            except StructureMatchError as e:
                raise ExperimentError(train_size, seed, e) from e
            report.records.extend(records)
            if refs is not None:
                report.references[(train_size, seed)] = refs

    report.elapsed = time.perf_counter() - started
    if cfg.output:
        write_report(report, cfg.output)
    return report


def summary_path_for(path: PathLike) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}_summary{path.suffix or '.csv'}")


def write_report(report: ExperimentReport, path: PathLike) -> Tuple[Path, Path]:
    """Write the per-cell report and the per-train-size summary next to it."""
    path = Path(path)
    report.frame().to_csv(path, index=False, float_format=REPORT_FLOAT_FORMAT)
    summary = summary_path_for(path)
    report.summary().to_csv(summary, index=False, float_format=REPORT_FLOAT_FORMAT)
    logger.info("Wrote %s and %s", path, summary)
    return path, summary
