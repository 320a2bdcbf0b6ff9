"""
Preprocessing for ELM training.
- Target min-max to [0, 1]
- Continuous features min-max to [-1, 1]
- Symbolic features to k indicator columns (one bit set per row)
- Seeded 70/30-style train/test split
"""

import math
from typing import List, Tuple

import numpy as np
from loguru import logger

from exceptions import DatasetValidationError
from tools.dataset_tools import (
    Column,
    ColumnKind,
    Dataset,
    FeatureScaling,
    NormalizationParams,
)


def _scale_feature(values: np.ndarray, minimum: float, maximum: float) -> np.ndarray:
    """Affine map min -> -1, max -> +1; constant columns go to 0."""
    span = maximum - minimum
    if span == 0:
        return np.zeros_like(values, dtype=float)
    return 2.0 * (values - minimum) / span - 1.0


def _scale_target(values: np.ndarray, minimum: float, maximum: float) -> np.ndarray:
    span = maximum - minimum
    if span == 0:
        return np.zeros_like(values, dtype=float)
    return (values - minimum) / span


def _indicator_columns(column: Column, categories: Tuple[str, ...]) -> List[Column]:
    """One 0/1 column per category; a row's own category gets the 1."""
    labels = column.labels()
    indicators = []
    for category in categories:
        bits = np.array([1.0 if label == category else 0.0 for label in labels])
        indicators.append(
            Column(f"{column.name}={category}", ColumnKind.CONTINUOUS, bits, indicator_of=column.name)
        )
    return indicators


def fit_normalization(dataset: Dataset) -> NormalizationParams:
    """
    Learn per-column ranges and observed category dictionaries.

    Raises:
        DatasetValidationError: if the target is constant
    """
    target = dataset.target.values
    t_min, t_max = float(target.min()), float(target.max())
    if t_max == t_min:
        raise DatasetValidationError(
            f"constant target in '{dataset.name}' (degenerate regression problem)"
        )

    scalings = []
    for column in dataset.features:
        if column.is_continuous:
            scalings.append(
                FeatureScaling(
                    name=column.name,
                    kind=ColumnKind.CONTINUOUS,
                    minimum=float(column.values.min()),
                    maximum=float(column.values.max()),
                )
            )
        else:
            observed = set(int(i) for i in np.unique(column.values))
            categories = tuple(c for i, c in enumerate(column.categories) if i in observed)
            scalings.append(FeatureScaling(name=column.name, kind=ColumnKind.SYMBOLIC, categories=categories))
    return NormalizationParams(features=tuple(scalings), target_min=t_min, target_max=t_max)


def apply_normalization(params: NormalizationParams, dataset: Dataset) -> Dataset:
    """
    Apply stored normalization parameters to a raw dataset (e.g. new rows).

    Values outside the stored ranges are mapped affinely, not clipped.
    """
    by_name = {c.name: c for c in dataset.features}
    features: List[Column] = []
    for scaling in params.features:
        column = by_name.get(scaling.name)
        if column is None:
            raise DatasetValidationError(f"column '{scaling.name}' missing from '{dataset.name}'")
        if scaling.kind == ColumnKind.CONTINUOUS:
            if column.indicator_of is not None:
                features.append(column)
                continue
            scaled = _scale_feature(column.values, scaling.minimum, scaling.maximum)
            features.append(Column(column.name, ColumnKind.CONTINUOUS, scaled))
        else:
            features.extend(_indicator_columns(column, scaling.categories))

    target = _scale_target(dataset.target.values, params.target_min, params.target_max)
    return Dataset(
        name=dataset.name,
        features=tuple(features),
        target=Column(dataset.target.name, ColumnKind.CONTINUOUS, target),
        normalized=True,
        normalization=params,
    )


def normalize(dataset: Dataset, force: bool = False) -> Dataset:
    """
    Normalize a raw dataset: target to [0, 1], continuous features to [-1, 1],
    symbolic features to indicator blocks.

    Args:
        dataset: Raw dataset
        force: Allow re-normalizing an already normalized dataset; indicator
            columns pass through unchanged and the result matches the input up to rounding

    Returns:
        New normalized Dataset carrying its NormalizationParams
    """
    if dataset.normalized and not force:
        raise DatasetValidationError(f"dataset '{dataset.name}' is already normalized")

    params = fit_normalization(dataset)
    result = apply_normalization(params, dataset)
    if dataset.normalized and dataset.normalization is not None:
        # keep the mapping back to raw units
        result = Dataset(
            name=result.name,
            features=result.features,
            target=result.target,
            normalized=True,
            normalization=dataset.normalization,
        )

    n_constant = sum(
        1 for s in params.features if s.kind == ColumnKind.CONTINUOUS and s.maximum == s.minimum
    )
    if n_constant:
        logger.warning(f"[INGEST] {dataset.name}: {n_constant} constant feature(s) mapped to 0")
    return result


def denormalize_target(params: NormalizationParams, values: np.ndarray) -> np.ndarray:
    """Map normalized target values back to raw units."""
    return np.asarray(values, dtype=float) * (params.target_max - params.target_min) + params.target_min


def train_size(n_rows: int, train_fraction: float) -> int:
    """round(train_fraction * n_rows), halves rounded up."""
    return int(math.floor(train_fraction * n_rows + 0.5))


def split_train_test(dataset: Dataset, train_fraction: float, seed: int) -> Tuple[Dataset, Dataset]:
    """
    Seeded uniform random partition of the rows.

    Args:
        dataset: Dataset with at least two rows
        train_fraction: Share of rows for training, strictly between 0 and 1
        seed: Seed that fully determines the permutation

    Returns:
        (train, test), each keeping the original row order
    """
    if not 0.0 < train_fraction < 1.0:
        raise DatasetValidationError(f"train fraction {train_fraction} not in (0, 1)")
    n_rows = dataset.n_rows
    if n_rows < 2:
        raise DatasetValidationError(f"cannot split '{dataset.name}' with {n_rows} row(s)")

    n_train = train_size(n_rows, train_fraction)
    if n_train == 0 or n_train == n_rows:
        raise DatasetValidationError(
            f"train fraction {train_fraction} leaves an empty partition for {n_rows} rows"
        )

    permutation = np.random.default_rng(seed).permutation(n_rows)
    train_rows = np.sort(permutation[:n_train])
    test_rows = np.sort(permutation[n_train:])
    return dataset.take(train_rows), dataset.take(test_rows)
