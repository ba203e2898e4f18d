"""Application configuration constants."""

APP_VERSION = "1.0.0"
APP_TITLE = "Space Structure Matching"
APP_ICON = ""  # No icon

# Method tag written into experiment reports
METHOD_TAG = "SSM"

# Logging
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# File formats
FEATURE_DELIMITERS = {
    "csv": ",",
    "tsv": "\t",
}
FLOAT_FORMAT = "%.17g"       # exact float64 round trip
REPORT_FLOAT_FORMAT = "%.10f"

# Modalities: A is the image side, B the text side
SPACE_KINDS = ["euclidean", "hamming"]
DIRECTIONS = ["a_to_b", "b_to_a"]
DEFAULT_DIRECTION = "b_to_a"   # text calibrated into the image space

# Structure metrics
METRICS = ["euclidean", "cosine"]
DEFAULT_METRIC = "cosine"
MAX_COSINE_DISTANCE = 2.0
CONDITION_WARNING = 1e8      # reference set reported as near-colinear above this

# SIF text embedding
SIF_A = 1e-3
SIF_REMOVE_PC = True

# Reference selection
DEFAULT_LAMBDA = 1.0
BRUTEFORCE_LIMIT = 20
LOCAL_SEARCH_SWEEPS = 100
SELECTORS = ["greedy", "bruteforce"]
DEFAULT_SELECTOR = "greedy"
DEFAULT_REFERENCES = 12     # per cell, capped at the train size; "all" opts out

# Calibration
DEFAULT_GAMMA = 1e-6

# Experiment protocol
DEFAULT_TRAIN_SIZES = list(range(6, 51, 4))
DEFAULT_SEEDS = list(range(10))
MIN_TRAIN_SIZE = 2

# Synthetic corpus (latent Gaussian, linear image side, sigmoid text side)
SYNTHETIC_DEFAULTS = {
    "n": 300,
    "latent_dim": 10,
    "dim_a": 64,
    "dim_b": 32,
    "n_labels": 10,
    "seed": 0,
}

# Correlation harness
MAPPINGS = ["linear", "sigmoid"]
DEFAULT_CORRELATION_RUN = {
    "n": 200,
    "d": 20,
    "e": 20,
    "trials": 100,
    "mapping": "linear",
    "seed": 1,
}
MIN_CORRELATION_N = 10

# Dashboard colors
DIRECTION_COLORS = {
    "a_to_b": "#3b82f6",
    "b_to_a": "#8b5cf6",
    "average": "#10b981",
}
