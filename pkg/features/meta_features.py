"""
Meta-Features - 16 descriptors of a raw regression dataset.

Extractors never abort on degenerate input: they contribute 0 and append a
warning code to the caller's list instead.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy import stats
from sklearn.preprocessing import scale

from config import CV_HIGH, CV_LOW, METABASE_META_SUFFIX, N_META_FEATURES, OUTLIER_FACTOR
from exceptions import ConfigurationError, MetaBaseSchemaError, TableLayoutError
from tools.dataset_tools import Column, Dataset
from utils.files import PathLike, config_hash, read_csv_table, read_json, sidecar_path, table_rows, write_csv, write_json

FEATURE_NAMES: Tuple[str, ...] = (
    "mean_skewness",
    "mean_kurtosis",
    "mean_abs_skewness",
    "max_mean_neighbor_target_distance",
    "max_abs_attr_target_correlation",
    "n_attributes",
    "n_examples",
    "n_continuous_with_outliers",
    "prop_continuous_with_outliers",
    "r2_numeric_only",
    "r2_with_binarized",
    "abs_cv_width_category",
    "cv_width_category",
    "target_has_outliers",
    "outlier_severity",
    "stddev_exceeds_mean",
)


# ============================================
# TYPES
# ============================================


@dataclass(frozen=True)
class FeatureConfig:
    """Knobs of the extractor; recorded in every meta-base header."""

    cv_low: float = CV_LOW
    cv_high: float = CV_HIGH
    outlier_factor: float = OUTLIER_FACTOR

    def validate(self) -> "FeatureConfig":
        if not 0 < self.cv_low < self.cv_high:
            raise ConfigurationError(f"CV thresholds must satisfy 0 < low < high, got {self.cv_low}, {self.cv_high}")
        if self.outlier_factor <= 0:
            raise ConfigurationError(f"outlier factor must be positive, got {self.outlier_factor}")
        return self

    def to_dict(self) -> Dict:
        return {
            "cv_low": self.cv_low,
            "cv_high": self.cv_high,
            "outlier_factor": self.outlier_factor,
            "outlier_rule": "tukey-linear-quartiles",
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "FeatureConfig":
        return cls(
            cv_low=float(data.get("cv_low", CV_LOW)),
            cv_high=float(data.get("cv_high", CV_HIGH)),
            outlier_factor=float(data.get("outlier_factor", OUTLIER_FACTOR)),
        ).validate()

    def hash(self) -> str:
        return config_hash(self.to_dict())


@dataclass(frozen=True)
class MetaFeatureVector:
    """The 16 descriptors in FEATURE_NAMES order, plus extraction warnings."""

    values: Tuple[float, ...]
    warnings: Tuple[str, ...] = ()
    config_hash: Optional[str] = None

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if len(values) != N_META_FEATURES:
            raise ValueError(f"expected {N_META_FEATURES} meta-features, got {len(values)}")
        if not all(np.isfinite(values)):
            raise ValueError("meta-features must be finite")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "warnings", tuple(self.warnings))

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)

    def as_dict(self) -> Dict[str, float]:
        return dict(zip(FEATURE_NAMES, self.values))

    def __getitem__(self, name: str) -> float:
        return self.values[FEATURE_NAMES.index(name)]


@dataclass(frozen=True)
class OutlierSummary:
    attribute_flags: Dict[str, bool]
    target_has_outliers: bool
    severity: float

    @property
    def n_flagged(self) -> int:
        return sum(1 for flag in self.attribute_flags.values() if flag)


# ============================================
# SINGLE-COLUMN STATISTICS
# ============================================


def _warn(warnings: Optional[List[str]], code: str) -> None:
    if warnings is not None:
        warnings.append(code)


def _has_variance(xs: np.ndarray) -> bool:
    return xs.size > 0 and float(np.ptp(xs)) > 0.0


def skewness(xs: Sequence[float], warnings: Optional[List[str]] = None) -> float:
    """Sample skewness m3 / m2^1.5 (biased moments); 0 for zero variance."""
    xs = np.asarray(xs, dtype=float)
    if not _has_variance(xs):
        _warn(warnings, "zero_variance")
        return 0.0
    return float(stats.skew(xs, bias=True))


def kurtosis(xs: Sequence[float], warnings: Optional[List[str]] = None) -> float:
    """Excess kurtosis m4 / m2^2 - 3 (biased moments); 0 for zero variance."""
    xs = np.asarray(xs, dtype=float)
    if not _has_variance(xs):
        _warn(warnings, "zero_variance")
        return 0.0
    return float(stats.kurtosis(xs, fisher=True, bias=True))


def quartiles(xs: Sequence[float]) -> Tuple[float, float]:
    """First and third quartile with linear interpolation."""
    q1, q3 = np.quantile(np.asarray(xs, dtype=float), [0.25, 0.75], method="linear")
    return float(q1), float(q3)


def tukey_fences(xs: Sequence[float], factor: float = OUTLIER_FACTOR) -> Tuple[float, float, float]:
    """(lower fence, upper fence, IQR)."""
    q1, q3 = quartiles(xs)
    iqr = q3 - q1
    return q1 - factor * iqr, q3 + factor * iqr, iqr


def has_outliers(xs: Sequence[float], factor: float = OUTLIER_FACTOR) -> bool:
    xs = np.asarray(xs, dtype=float)
    lower, upper, _ = tukey_fences(xs, factor)
    return bool(np.any((xs < lower) | (xs > upper)))


def outlier_severity(xs: Sequence[float], factor: float = OUTLIER_FACTOR) -> float:
    """Largest distance beyond the nearer fence, in IQR units; 0 without outliers or IQR."""
    xs = np.asarray(xs, dtype=float)
    lower, upper, iqr = tukey_fences(xs, factor)
    if iqr == 0:
        return 0.0
    excess = np.maximum(lower - xs, xs - upper)
    worst = float(excess.max())
    return worst / iqr if worst > 0 else 0.0


def max_mean_neighbor_distance(target: Sequence[float]) -> float:
    """
    Sort the targets; each value's mean distance to its sorted neighbours
    (a single neighbour at the ends). Returns the largest such mean.
    """
    ordered = np.sort(np.asarray(target, dtype=float))
    if ordered.size < 2:
        return 0.0
    gaps = np.diff(ordered)
    means = np.empty(ordered.size)
    means[0] = gaps[0]
    means[-1] = gaps[-1]
    means[1:-1] = (gaps[:-1] + gaps[1:]) / 2.0
    return float(means.max())


def cv_width_category(
    target: Sequence[float],
    absolute: bool,
    cv_low: float = CV_LOW,
    cv_high: float = CV_HIGH,
) -> int:
    """
    Sparsity level of the target from its coefficient of variation.

    Returns:
        0 if CV < cv_low, 1 if cv_low <= CV < cv_high, 2 otherwise (and for mean 0)
    """
    t = np.asarray(target, dtype=float)
    if absolute:
        t = np.abs(t)
    mean = float(t.mean())
    if mean == 0:
        return 2
    cv = float(t.std()) / abs(mean)
    if cv < cv_low:
        return 0
    if cv < cv_high:
        return 1
    return 2


# ============================================
# DATASET-LEVEL STATISTICS
# ============================================


def max_attr_target_correlation(dataset: Dataset, warnings: Optional[List[str]] = None) -> float:
    """Largest |Pearson r| between a continuous attribute and the target."""
    target = dataset.target.values
    eligible = [c for c in dataset.continuous_features if _has_variance(c.values)]
    if not eligible or not _has_variance(target):
        _warn(warnings, "no_correlation_candidates")
        return 0.0
    return float(max(abs(stats.pearsonr(c.values, target)[0]) for c in eligible))


def outlier_flags(dataset: Dataset, factor: float = OUTLIER_FACTOR) -> OutlierSummary:
    """Tukey-fence outlier flags for every continuous attribute and the target."""
    flags = {c.name: has_outliers(c.values, factor) for c in dataset.continuous_features}
    target = dataset.target.values
    return OutlierSummary(
        attribute_flags=flags,
        target_has_outliers=has_outliers(target, factor),
        severity=outlier_severity(target, factor),
    )


def _one_hot(column: Column) -> np.ndarray:
    return np.eye(len(column.categories))[column.values]


def _residualize(design: np.ndarray, values: np.ndarray, scale_of: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Remove from ``values`` its projection on the column space of ``design``.

    Directions with singular value below eps * max(shape) * ||scale_of||
    are treated as rank deficiency (``scale_of`` defaults to ``design``).
    """
    basis, singular, _ = np.linalg.svd(design, full_matrices=False)
    reference = design if scale_of is None else scale_of
    tol = np.finfo(float).eps * max(design.shape) * np.linalg.norm(reference, 2)
    basis = basis[:, singular > tol]
    return values - basis @ (basis.T @ values)


def r_squared(dataset: Dataset, include_binarized: bool, warnings: Optional[List[str]] = None) -> float:
    """
    R^2 of an OLS fit (with intercept) of the target on the continuous
    attributes, plus one-hot symbolic attributes when ``include_binarized``.

    Continuous columns are standardized first. The one-hot block is
    partialled out against the numeric design and fitted to the numeric
    residual, which gives the joint fit while keeping the binarized value
    at or above the numeric-only one. Rank deficiency is handled by
    dropping negligible singular directions (minimum-norm solution).
    """
    suffix = "binarized" if include_binarized else "numeric"
    continuous = [c.values for c in dataset.continuous_features]
    one_hot = [_one_hot(c) for c in dataset.symbolic_features] if include_binarized else []
    if not continuous and not one_hot:
        _warn(warnings, f"r2_{suffix}_no_columns")
        return 0.0

    n_columns = 1 + len(continuous) + sum(block.shape[1] for block in one_hot)
    if dataset.n_rows <= n_columns:
        _warn(warnings, f"r2_{suffix}_underdetermined")
        return 1.0

    target = dataset.target.values
    ss_tot = float(np.sum((target - target.mean()) ** 2))
    if ss_tot == 0:
        _warn(warnings, f"r2_{suffix}_constant_target")
        return 0.0

    design = np.ones((dataset.n_rows, 1))
    if continuous:
        design = np.column_stack([design, scale(np.column_stack(continuous))])
    residual = _residualize(design, target)
    if one_hot:
        block = np.column_stack(one_hot)
        residual = _residualize(_residualize(design, block), residual, scale_of=block)

    ss_res = float(np.sum(residual**2))
    return float(np.clip(1.0 - ss_res / ss_tot, 0.0, 1.0))


# ============================================
# EXTRACTION
# ============================================


def extract_meta_features(dataset: Dataset, config: Optional[FeatureConfig] = None) -> MetaFeatureVector:
    """
    Compute the 16 meta-features of a raw dataset.

    Args:
        dataset: Raw (pre-normalization) dataset
        config: Extractor thresholds; defaults from config.py

    Returns:
        MetaFeatureVector in FEATURE_NAMES order, with warning codes
    """
    config = config or FeatureConfig()
    if dataset.normalized:
        logger.warning(f"[FEATURES] {dataset.name}: extracting from normalized data")

    warnings: List[str] = []
    continuous = dataset.continuous_features
    target = dataset.target.values

    if continuous:
        skews, kurts = [], []
        for column in continuous:
            column_warnings: List[str] = []
            skews.append(skewness(column.values, column_warnings))
            kurts.append(kurtosis(column.values))
            if column_warnings:
                warnings.append(f"zero_variance:{column.name}")
        mean_skew = float(np.mean(skews))
        mean_kurt = float(np.mean(kurts))
        mean_abs_skew = float(np.mean(np.abs(skews)))
        max_corr = max_attr_target_correlation(dataset, warnings)
    else:
        warnings.append("no_continuous_attributes")
        mean_skew = mean_kurt = mean_abs_skew = max_corr = 0.0

    outliers = outlier_flags(dataset, config.outlier_factor)
    n_with_outliers = outliers.n_flagged

    values = (
        mean_skew,
        mean_kurt,
        mean_abs_skew,
        max_mean_neighbor_distance(target),
        max_corr,
        float(len(dataset.features)),
        float(dataset.n_rows),
        float(n_with_outliers),
        n_with_outliers / max(1, len(continuous)),
        r_squared(dataset, include_binarized=False, warnings=warnings),
        r_squared(dataset, include_binarized=True, warnings=warnings),
        float(cv_width_category(target, True, config.cv_low, config.cv_high)),
        float(cv_width_category(target, False, config.cv_low, config.cv_high)),
        1.0 if outliers.target_has_outliers else 0.0,
        outliers.severity,
        1.0 if float(target.std()) > float(target.mean()) else 0.0,
    )

    if warnings:
        logger.warning(f"[FEATURES] {dataset.name}: {';'.join(warnings)}")
    return MetaFeatureVector(values=values, warnings=tuple(warnings), config_hash=config.hash())


# ============================================
# PERSISTENCE
# ============================================

FEATURES_HEADER = ["dataset", *FEATURE_NAMES, "warnings"]


def write_features(rows: Sequence[Tuple[str, MetaFeatureVector]], path: PathLike, config: FeatureConfig) -> Path:
    """One CSV row per dataset plus a sidecar with the extractor config."""
    path = Path(path)
    write_csv(path, FEATURES_HEADER, [(name, *v.values, ";".join(v.warnings)) for name, v in rows])
    write_json(
        sidecar_path(path, METABASE_META_SUFFIX),
        {"feature_config": config.to_dict(), "feature_config_hash": config.hash()},
    )
    return path


def read_features(path: PathLike) -> Tuple[List[Tuple[str, MetaFeatureVector]], FeatureConfig]:
    """Read a features CSV; vectors carry the config hash of its sidecar."""
    path = Path(path)
    meta_path = sidecar_path(path, METABASE_META_SUFFIX)
    config = FeatureConfig.from_dict(read_json(meta_path)["feature_config"]) if meta_path.exists() else FeatureConfig()
    try:
        frame = read_csv_table(path, FEATURES_HEADER)
    except TableLayoutError as e:
        if e.line <= 1:
            raise MetaBaseSchemaError(1, f"{path} is not a meta-features file") from e
        raise MetaBaseSchemaError(e.line, e.details) from e

    vectors = []
    for line_no, row in table_rows(frame):
        try:
            values = [float(v) for v in row[1:-1]]
        except ValueError as e:
            raise MetaBaseSchemaError(line_no, str(e)) from e
        warnings = tuple(w for w in row[-1].split(";") if w)
        vectors.append((row[0], MetaFeatureVector(values, warnings, config.hash())))
    return vectors, config
