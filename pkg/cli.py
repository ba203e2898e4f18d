"""Command-line front end for the structure-matching pipeline.

Each subcommand runs one stage and writes its artifact to a file, so the
pipeline can be inspected step by step:

    embed-text          sentences -> SIF feature matrix
    build-structure     features + reference set -> structure matrix
    select-refs         paired corpus -> reference set
    calibrate           two structure matrices + reference set -> calibration model
    match               calibrated queries against targets -> rankings
    run                 full train-size sweep -> report + summary csv
    verify-correlation  Monte Carlo check of structure correlation -> report csv

Exit status: 0 on success, 1 on a data, runtime or file-system error, 2 on
a usage or validation error.
"""

import argparse
import logging
import sys
from typing import List, Optional

from config.loader import load_config_file
from config.settings import (
    APP_VERSION,
    DEFAULT_CORRELATION_RUN,
    DEFAULT_DIRECTION,
    DEFAULT_GAMMA,
    DEFAULT_LAMBDA,
    DEFAULT_METRIC,
    DEFAULT_SELECTOR,
    DIRECTIONS,
    FEATURE_DELIMITERS,
    LOG_FORMAT,
    MAPPINGS,
    METRICS,
    MIN_CORRELATION_N,
    SELECTORS,
    SIF_A,
    SPACE_KINDS,
)
from services import (
    Direction,
    ExperimentConfig,
    ModalityDataset,
    SifConfig,
    build_structure,
    fit_calibration,
    load_calibration,
    load_corpus,
    load_feature_matrix,
    load_frequencies,
    load_labels,
    load_reference_set,
    load_sentences,
    load_structure,
    load_word_vectors,
    match,
    monte_carlo_verify,
    run_experiment,
    select_references,
    sif_embed,
    split_corpus,
    write_calibration,
    write_correlation_report,
    write_feature_matrix,
    write_rankings,
    write_reference_set,
    write_structure,
)
from utils import format_duration, format_fraction, format_map, format_shape
from utils.errors import ConfigError, StructureMatchError

logger = logging.getLogger("cli")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2


def _int_at_least(minimum: int):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {value}")
        return value
    return parse


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {value}")
    return value


def _nonnegative_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _load_dataset(features: str, labels: Optional[str], space: str, fmt: str) -> ModalityDataset:
    """A modality from files; without labels every object is its own class."""
    matrix = load_feature_matrix(features, fmt)
    ids = [str(i) for i in range(matrix.rows)]
    label_list = load_labels(labels) if labels else ids
    return ModalityDataset(matrix, tuple(ids), tuple(label_list), space)


# Subcommands

def cmd_embed_text(args: argparse.Namespace) -> int:
    sentences = load_sentences(args.sentences)
    vectors = load_word_vectors(args.vectors)
    freqs = load_frequencies(args.freqs)
    embedding = sif_embed(sentences, vectors, freqs, SifConfig(args.a, not args.no_remove_pc))
    write_feature_matrix(embedding.features, args.out, args.format)

    print(f"{format_shape(embedding.features.rows, embedding.features.cols)} "
          f"written to {args.out}")
    if embedding.empty_rows:
        print(f"{len(embedding.empty_rows)} sentences had no known token (zero rows)")
    return EXIT_OK


def cmd_build_structure(args: argparse.Namespace) -> int:
    data = _load_dataset(args.features, args.labels, args.space, args.format)
    refs = load_reference_set(args.refs)
    indices = refs.indices_a if args.side == "a" else refs.indices_b
    structure = build_structure(data, indices)
    write_structure(structure, args.out)

    print(f"{format_shape(structure.rows, structure.refs)} structure written to {args.out} "
          f"(condition {structure.condition:.3g})")
    return EXIT_OK


def cmd_select_refs(args: argparse.Namespace) -> int:
    corpus = load_corpus(
        args.features_a, args.labels_a,
        args.features_b, args.labels_b,
        args.pairs,
        args.space_a, args.space_b,
        args.format,
    )
    if args.train_size is not None:
        train_pairs = split_corpus(corpus, args.train_size, args.seed).train_pairs
    else:
        train_pairs = corpus.pairs

    refs = select_references(corpus.mod_a, corpus.mod_b, train_pairs, args.k, args.lam, args.selector)
    write_reference_set(refs, args.out)

    print(f"k={refs.k} objective={refs.objective_value:.6g} ({refs.method}) written to {args.out}")
    return EXIT_OK


def cmd_calibrate(args: argparse.Namespace) -> int:
    direction = Direction.parse(args.direction)
    struct_a = load_structure(args.structure_a)
    struct_b = load_structure(args.structure_b)
    refs = load_reference_set(args.refs)

    rows_a = struct_a.take(refs.indices_a)
    rows_b = struct_b.take(refs.indices_b)
    if direction is Direction.A_TO_B:
        model = fit_calibration(rows_a, rows_b, args.gamma, direction)
    else:
        model = fit_calibration(rows_b, rows_a, args.gamma, direction)
    write_calibration(model, args.out)

    print(f"k={model.k} direction={model.direction.value} written to {args.out}")
    if model.degenerate_dims:
        print(f"degenerate dimensions: {list(model.degenerate_dims)}")
    return EXIT_OK


def cmd_match(args: argparse.Namespace) -> int:
    queries = load_structure(args.queries)
    targets = load_structure(args.targets)
    model = load_calibration(args.model)
    rankings = match(queries, targets, model, args.metric)
    write_rankings(rankings, args.out)

    flagged = sum(r.zero_rows for r in rankings)
    print(f"{len(rankings)} queries ranked against {targets.rows} targets, written to {args.out}")
    if flagged:
        print(f"{flagged} queries involved a zero structure row")
    return EXIT_OK


RUN_OVERRIDES = {
    "train_sizes": "train_sizes",
    "seeds": "seeds",
    "references": "references",
    "selector": "selector",
    "lam": "lambda",
    "gamma": "gamma",
    "metric": "metric",
    "direction": "direction",
    "output": "output",
}


def cmd_run(args: argparse.Namespace) -> int:
    values = load_config_file(args.config) if args.config else {}
    for attr, key in RUN_OVERRIDES.items():
        flag = getattr(args, attr)
        if flag is not None:
            values[key] = str(flag)
    cfg = ExperimentConfig.from_mapping(values)

    report = run_experiment(cfg)

    summary = report.summary()
    for row in summary.itertuples(index=False):
        print(f"{row.direction:<8} train_size={row.train_size:<4} "
              f"mAP={format_map(row.map_mean)} +/- {format_map(row.map_std)}")
    print(f"{len(report.records)} records in {format_duration(report.elapsed)}"
          + (f", written to {cfg.output}" if cfg.output else ""))
    return EXIT_OK


def cmd_verify_correlation(args: argparse.Namespace) -> int:
    report = monte_carlo_verify(args.n, args.d, args.e, args.trials, args.mapping, args.seed)
    if args.out:
        write_correlation_report(report, args.out)

    print(report.summary_line())
    logger.info("%s of trials positive", format_fraction(report.fraction_positive))
    return EXIT_OK


# Parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssm",
        description="Cross-modal matching through space structure representations.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {APP_VERSION}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed-text", help="SIF sentence embeddings")
    p.add_argument("--sentences", required=True, help="one sentence per line")
    p.add_argument("--vectors", required=True, help="'word v1 ... vd' lines (GloVe text)")
    p.add_argument("--freqs", required=True, help="'word value' lines, counts or probabilities")
    p.add_argument("--out", required=True, help="feature matrix output")
    p.add_argument("--a", type=_positive_float, default=SIF_A, help="smoothing parameter")
    p.add_argument("--no-remove-pc", action="store_true",
                   help="keep the first principal component")
    p.add_argument("--format", choices=sorted(FEATURE_DELIMITERS), default="csv")
    p.set_defaults(handler=cmd_embed_text)

    p = sub.add_parser("build-structure", help="distances to the reference objects")
    p.add_argument("--features", required=True, help="feature matrix of one modality")
    p.add_argument("--labels", help="label file (optional)")
    p.add_argument("--space", choices=SPACE_KINDS, default="euclidean")
    p.add_argument("--refs", required=True, help="reference set file")
    p.add_argument("--side", choices=["a", "b"], required=True,
                   help="which column of the reference set indexes this modality")
    p.add_argument("--out", required=True, help="structure csv output, reference ids as header")
    p.add_argument("--format", choices=sorted(FEATURE_DELIMITERS), default="csv")
    p.set_defaults(handler=cmd_build_structure)

    p = sub.add_parser("select-refs", help="choose reference pairs")
    p.add_argument("--features-a", required=True)
    p.add_argument("--labels-a", required=True)
    p.add_argument("--features-b", required=True)
    p.add_argument("--labels-b", required=True)
    p.add_argument("--pairs", required=True, help="'indexA,indexB' lines")
    p.add_argument("--space-a", choices=SPACE_KINDS, default="euclidean")
    p.add_argument("--space-b", choices=SPACE_KINDS, default="euclidean")
    p.add_argument("--k", type=_int_at_least(1), required=True, help="number of references")
    p.add_argument("--lambda", dest="lam", type=_positive_float, default=DEFAULT_LAMBDA)
    p.add_argument("--selector", choices=SELECTORS, default=DEFAULT_SELECTOR)
    p.add_argument("--train-size", type=_int_at_least(1),
                   help="select among a random training subset of this size")
    p.add_argument("--seed", type=int, default=0, help="seed of the training subset")
    p.add_argument("--out", required=True, help="reference set output")
    p.add_argument("--format", choices=sorted(FEATURE_DELIMITERS), default="csv")
    p.set_defaults(handler=cmd_select_refs)

    p = sub.add_parser("calibrate", help="fit per-dimension scale and bias")
    p.add_argument("--structure-a", required=True, help="structure csv of modality A")
    p.add_argument("--structure-b", required=True, help="structure csv of modality B")
    p.add_argument("--refs", required=True, help="reference set the structures were built on")
    p.add_argument("--gamma", type=_nonnegative_float, default=DEFAULT_GAMMA)
    p.add_argument("--direction", choices=DIRECTIONS, default=DEFAULT_DIRECTION)
    p.add_argument("--out", required=True, help="calibration model output")
    p.set_defaults(handler=cmd_calibrate)

    p = sub.add_parser("match", help="rank targets for calibrated queries")
    p.add_argument("--queries", required=True, help="structure csv in the model's source space")
    p.add_argument("--targets", required=True, help="structure csv in the model's target space")
    p.add_argument("--model", required=True, help="calibration model file")
    p.add_argument("--metric", choices=METRICS, default=DEFAULT_METRIC)
    p.add_argument("--out", required=True,
                   help="rankings csv (query_index, rank, target_index, distance)")
    p.set_defaults(handler=cmd_match)

    p = sub.add_parser("run", help="train-size sweep with mAP report")
    p.add_argument("--config", help="key=value file; flags below override it")
    p.add_argument("--train-sizes", help="'6,10,14' or 'start:stop:step'")
    p.add_argument("--seeds", help="'0,1,2' or 'start:stop'")
    p.add_argument("--references", help="reference count or 'all'")
    p.add_argument("--selector", choices=SELECTORS)
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--gamma")
    p.add_argument("--metric", choices=METRICS)
    p.add_argument("--direction", choices=DIRECTIONS)
    p.add_argument("--output", help="report csv; the summary goes to <name>_summary.csv")
    p.set_defaults(handler=cmd_run)

    defaults = DEFAULT_CORRELATION_RUN
    p = sub.add_parser("verify-correlation", help="Monte Carlo structure correlation check")
    p.add_argument("--n", type=_int_at_least(MIN_CORRELATION_N), default=defaults["n"])
    p.add_argument("--d", type=_int_at_least(1), default=defaults["d"])
    p.add_argument("--e", type=_int_at_least(1), default=defaults["e"])
    p.add_argument("--trials", type=_int_at_least(1), default=defaults["trials"])
    p.add_argument("--mapping", choices=MAPPINGS, default=defaults["mapping"])
    p.add_argument("--seed", type=int, default=defaults["seed"])
    p.add_argument("--out", help="correlation report csv")
    p.set_defaults(handler=cmd_verify_correlation)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format=LOG_FORMAT,
    )

    try:
        return args.handler(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (StructureMatchError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
