"""
Hidden-Neuron Advisor Configuration
All constants, numeric defaults, environment overrides and CLI messages.
"""

import os
from dotenv import load_dotenv

load_dotenv()

TOOL_VERSION = "1.0.0"

# --- Environment Overrides ---
LOG_LEVEL = os.getenv("ELM_ADVISOR_LOG_LEVEL", "INFO")
DEFAULT_WORKERS = int(os.getenv("ELM_ADVISOR_WORKERS", "1"))
DEFAULT_SEED = int(os.getenv("ELM_ADVISOR_SEED", "42"))

# --- Corpus Admission ---
MIN_ROWS = 100
MIN_DISTINCT_TARGETS = 10

# --- Ingestion ---
SUPPORTED_FORMATS = {".csv": "csv", ".arff": "arff"}
MISSING_MARKERS = ["", "?"]
SCHEMA_SUFFIX = ".schema.json"

# --- ELM ---
ELM_RCOND = 1e-10  # singular values below ELM_RCOND * sigma_max are dropped
WEIGHT_RANGE = (-1.0, 1.0)
BIAS_RANGE = (0.0, 1.0)

# --- Label Sweep ---
SWEEP_N_MIN = 1
SWEEP_N_MAX = 300
SWEEP_REPETITIONS = 10
TRAIN_FRACTION = 0.7

# --- Meta-Features ---
CV_LOW = 0.5
CV_HIGH = 1.0
OUTLIER_FACTOR = 1.5
N_META_FEATURES = 16

# --- Meta-Base ---
METABASE_SCHEMA_VERSION = 1
METABASE_META_SUFFIX = ".meta.json"

# --- Meta-Learners ---
RIDGE_FALLBACK = 1e-8
SVR_C = 1.0
SVR_EPSILON = 1e-3
SVR_TOLERANCE = 1e-3
SVR_POLY_DEGREE = 1
SVR_POLY_COEF0 = 0.0
SVR_RBF_GAMMAS = (0.01, 0.1, 1.0)
M5_MIN_LEAF = 4
M5_SMOOTHING_K = 15.0
M5_SD_FRACTION = 0.05  # stop splitting below this share of the root deviation
M5_SMALL_NODE_FACTOR = 10.0  # error multiplier when a node has no spare degrees of freedom

# Learners evaluated when no learner list is given
DEFAULT_LEARNERS = [
    "linear",
    "svr-poly",
    "svr-rbf-0.01",
    "svr-rbf-0.1",
    "svr-rbf-1",
    "knn1",
    "m5",
    "mean",
]

# --- Reports ---
HISTOGRAM_BIN_WIDTH = 50

# --- Exit Codes ---
EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2

# --- Messages ---
MESSAGES = {
    "ingest_done": "Ingested {count} dataset(s): {admitted} admitted, {rejected} rejected.",
    "features_done": "Wrote meta-features for {count} dataset(s) to {path} ({skipped} inadmissible skipped)",
    "sweep_done": "Swept {count} dataset(s), {failed} failure(s). Summary: {path}",
    "metabase_done": "Meta-base with {count} example(s) written to {path} ({skipped} skipped)",
    "train_done": "Trained {learner} on {count} meta-example(s): {path}",
    "evaluate_done": "Evaluated {count} learner(s). Table: {path}",
    "report_done": "Histogram with {bins} bin(s) over {count} result(s): {path}",
    "pipeline_done": "Pipeline finished. Artifacts in {path}",
    "inadmissible": "Dataset {name} fails corpus admission ({reasons}); recommending anyway.",
    "unexpected_error": "An unexpected error occurred. See the log for details.",
}
