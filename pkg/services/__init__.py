"""Structure-matching pipeline services."""

from .data import (
    FeatureMatrix,
    ModalityDataset,
    PairedCorpus,
    Split,
    SpaceKind,
    load_feature_matrix,
    write_feature_matrix,
    load_labels,
    load_pairs,
    load_modality,
    load_corpus,
    split_corpus,
)
from .text_embed import (
    WordVectorTable,
    FrequencyTable,
    SifConfig,
    SifEmbedding,
    load_word_vectors,
    load_frequencies,
    load_sentences,
    tokenize,
    sif_weight,
    sif_embed,
    embed_sentences,
    remove_first_principal_component,
)
from .structure import (
    StructureMatrix,
    StructureMetric,
    euclidean_distance,
    hamming_distance,
    build_structure,
    structure_distance,
    pairwise_structure_distances,
    reference_condition,
    write_structure,
    load_structure,
)
from .refselect import (
    ReferenceSet,
    objective,
    pair_objective,
    select_references,
    select_references_bruteforce,
    select_references_greedy,
    write_reference_set,
    load_reference_set,
)
from .calibrate import (
    CalibrationModel,
    Direction,
    RankedMatches,
    fit_calibration,
    apply_calibration,
    match,
    residuals,
    write_calibration,
    load_calibration,
    write_rankings,
)
from .correlate import (
    MappingKind,
    SimilarityMatrix,
    CorrelationReport,
    inner_product_similarity,
    empirical_pearson,
    analytic_rho,
    analytic_rho_closed_form,
    monte_carlo_verify,
    convergence_gaps,
    write_correlation_report,
)
from .evaluate import (
    ExperimentConfig,
    ExperimentReport,
    average_precision,
    mean_average_precision,
    random_baseline_ap,
    random_baseline_map,
    run_experiment,
    write_report,
    summarize_report,
)
from .synthetic import make_synthetic_corpus

__all__ = [
    'FeatureMatrix',
    'ModalityDataset',
    'PairedCorpus',
    'Split',
    'SpaceKind',
    'load_feature_matrix',
    'write_feature_matrix',
    'load_labels',
    'load_pairs',
    'load_modality',
    'load_corpus',
    'split_corpus',
    'WordVectorTable',
    'FrequencyTable',
    'SifConfig',
    'SifEmbedding',
    'load_word_vectors',
    'load_frequencies',
    'load_sentences',
    'tokenize',
    'sif_weight',
    'sif_embed',
    'embed_sentences',
    'remove_first_principal_component',
    'StructureMatrix',
    'StructureMetric',
    'euclidean_distance',
    'hamming_distance',
    'build_structure',
    'structure_distance',
    'pairwise_structure_distances',
    'reference_condition',
    'write_structure',
    'load_structure',
    'ReferenceSet',
    'objective',
    'pair_objective',
    'select_references',
    'select_references_bruteforce',
    'select_references_greedy',
    'write_reference_set',
    'load_reference_set',
    'CalibrationModel',
    'Direction',
    'RankedMatches',
    'fit_calibration',
    'apply_calibration',
    'match',
    'residuals',
    'write_calibration',
    'load_calibration',
    'write_rankings',
    'MappingKind',
    'SimilarityMatrix',
    'CorrelationReport',
    'inner_product_similarity',
    'empirical_pearson',
    'analytic_rho',
    'analytic_rho_closed_form',
    'monte_carlo_verify',
    'convergence_gaps',
    'write_correlation_report',
    'ExperimentConfig',
    'ExperimentReport',
    'average_precision',
    'mean_average_precision',
    'random_baseline_ap',
    'random_baseline_map',
    'run_experiment',
    'write_report',
    'summarize_report',
    'make_synthetic_corpus',
]
