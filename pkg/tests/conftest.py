"""
Pytest fixtures for the hidden-neuron advisor tests.
"""

import os
import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import METABASE_SCHEMA_VERSION
from features.meta_features import FEATURE_NAMES, FeatureConfig
from metabase.store import MetaBase, MetaExample
from tools.dataset_tools import Column, ColumnKind, Dataset, save_dataset
from tools.synthetic import make_corpus, make_sinusoid_dataset

FIXTURES = Path(__file__).parent / "fixtures"


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="Run slow end-to-end tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running end-to-end test (needs --runslow)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


# ============================================
# DATASETS
# ============================================


def make_dataset(X, y, name="fixture", symbolic=None) -> Dataset:
    """Raw dataset from a feature matrix, a target vector and optional symbolic columns."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    features = [Column(f"x{j + 1}", ColumnKind.CONTINUOUS, X[:, j]) for j in range(X.shape[1])]
    for column_name, (ids, categories) in (symbolic or {}).items():
        features.append(Column(column_name, ColumnKind.SYMBOLIC, np.asarray(ids), tuple(categories)))
    return Dataset(name=name, features=tuple(features), target=Column("y", ColumnKind.CONTINUOUS, np.asarray(y)))


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def linear_dataset():
    """100 x 3 continuous inputs with an exactly linear target."""
    rng = np.random.default_rng(7)
    X = rng.uniform(-2.0, 2.0, size=(100, 3))
    y = 1.5 * X[:, 0] - 2.0 * X[:, 1] + 0.5 * X[:, 2] + 10.0
    return make_dataset(X, y, name="linear")


@pytest.fixture
def mixed_dataset():
    """120 rows, two continuous inputs and one three-level symbolic input."""
    rng = np.random.default_rng(11)
    X = rng.normal(size=(120, 2))
    levels = rng.integers(0, 3, size=120)
    y = X[:, 0] + 0.5 * levels + 0.1 * rng.normal(size=120)
    return make_dataset(X, y, name="mixed", symbolic={"level": (levels, ("a", "b", "c"))})


@pytest.fixture
def synthetic_dataset():
    return make_sinusoid_dataset("sine", n_rows=150, n_features=2, n_components=2, seed=3)


def write_corpus(directory: Path, n_datasets: int, seed: int = 0, n_rows: int = 120) -> Path:
    """Write a synthetic corpus as CSV files; returns the directory."""
    directory.mkdir(parents=True, exist_ok=True)
    for dataset, _ in make_corpus(n_datasets, seed=seed, n_rows=n_rows):
        save_dataset(dataset, directory / f"{dataset.name}.csv")
    return directory


@pytest.fixture
def corpus_dir(tmp_path):
    """Five synthetic datasets on disk."""
    return write_corpus(tmp_path / "corpus", 5, seed=1)


# ============================================
# META-BASES
# ============================================


def make_metabase(features, labels, label_range=(1, 300), names=None) -> MetaBase:
    """MetaBase straight from arrays, with a provenance header like build_metabase writes."""
    features = np.asarray(features, dtype=float)
    names = names or [f"ds_{i:03d}" for i in range(len(labels))]
    config = FeatureConfig()
    provenance = {
        "schema_version": METABASE_SCHEMA_VERSION,
        "feature_names": list(FEATURE_NAMES),
        "feature_config": config.to_dict(),
        "feature_config_hash": config.hash(),
        "sweep_config": None,
        "label_range": list(label_range),
        "skipped": [],
    }
    examples = [MetaExample(n, tuple(row), int(label)) for n, row, label in zip(names, features, labels)]
    return MetaBase(examples=tuple(examples), provenance=provenance)


def random_metabase(n: int, seed: int = 0, label_range=(1, 300)) -> MetaBase:
    """Meta-base whose labels depend smoothly on the first three meta-features."""
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, len(FEATURE_NAMES)))
    raw = 150 + 40 * X[:, 0] - 25 * X[:, 1] + 10 * X[:, 2] ** 2
    labels = np.clip(np.rint(raw), *label_range).astype(int)
    return make_metabase(X, labels, label_range)


@pytest.fixture
def small_metabase():
    return random_metabase(12, seed=5)
