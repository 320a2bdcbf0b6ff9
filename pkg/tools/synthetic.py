"""
Synthetic regression corpora with controllable complexity.

Each dataset's target is a sum of ``n_components`` sinusoids of random
projections of the inputs, so more components need more hidden neurons.
"""

from typing import List, Tuple

import numpy as np

from tools.dataset_tools import Column, ColumnKind, Dataset

SYMBOLIC_LEVELS = ("low", "mid", "high")


def make_sinusoid_dataset(
    name: str,
    n_rows: int = 150,
    n_features: int = 3,
    n_components: int = 1,
    seed: int = 0,
    noise: float = 0.01,
    symbolic: bool = False,
) -> Dataset:
    """
    Build one raw synthetic dataset.

    Args:
        name: Dataset name
        n_rows: Number of rows
        n_features: Number of continuous inputs
        n_components: Number of sinusoidal terms in the target (complexity)
        seed: Generator seed
        noise: Standard deviation of additive Gaussian noise
        symbolic: Append a 3-level symbolic column that shifts the target

    Returns:
        Raw (un-normalized) Dataset
    """
    rng = np.random.default_rng(seed)
    X = rng.uniform(-3.0, 3.0, size=(n_rows, n_features))

    target = np.zeros(n_rows)
    for k in range(n_components):
        direction = rng.normal(size=n_features)
        direction /= np.linalg.norm(direction)
        frequency = 0.5 + 0.5 * k
        phase = rng.uniform(0.0, 2.0 * np.pi)
        target += np.sin(frequency * (X @ direction) + phase)
    target += noise * rng.normal(size=n_rows)

    features = [Column(f"x{j + 1}", ColumnKind.CONTINUOUS, X[:, j]) for j in range(n_features)]
    if symbolic:
        level_ids = rng.integers(0, len(SYMBOLIC_LEVELS), size=n_rows)
        target += 0.5 * level_ids
        features.append(Column("level", ColumnKind.SYMBOLIC, level_ids, SYMBOLIC_LEVELS))

    return Dataset(name=name, features=tuple(features), target=Column("y", ColumnKind.CONTINUOUS, target))


def make_corpus(
    n_datasets: int,
    seed: int = 0,
    n_rows: int = 150,
    max_components: int = 8,
    noise: float = 0.01,
) -> List[Tuple[Dataset, int]]:
    """
    Build a corpus of datasets with randomized complexity.

    Returns:
        List of (dataset, n_components) pairs
    """
    rng = np.random.default_rng(seed)
    corpus = []
    for i in range(n_datasets):
        n_components = int(rng.integers(1, max_components + 1))
        n_features = int(rng.integers(2, 6))
        dataset = make_sinusoid_dataset(
            name=f"synth_{i:03d}",
            n_rows=n_rows,
            n_features=n_features,
            n_components=n_components,
            seed=int(rng.integers(0, 2**31 - 1)),
            noise=noise,
            symbolic=bool(i % 3 == 0),
        )
        corpus.append((dataset, n_components))
    return corpus
