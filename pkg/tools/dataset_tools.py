"""
Dataset Tools for Regression Corpora
- Column / Dataset types (immutable)
- CSV and ARFF (dense subset) ingestion
- Canonical CSV + JSON schema serialization
- Corpus admission checks
"""

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from loguru import logger
from scipy.io import arff

from config import (
    MIN_DISTINCT_TARGETS,
    MIN_ROWS,
    MISSING_MARKERS,
    SCHEMA_SUFFIX,
    SUPPORTED_FORMATS,
)
from exceptions import ConfigurationError, DatasetParseError, DatasetValidationError, TableLayoutError
from utils.files import PathLike, read_csv_table, read_json, sanitize_dataset_name, sidecar_path, write_csv, write_json

ARFF_NUMERIC_TYPES = ("numeric",)
ARFF_NOMINAL_TYPES = ("nominal",)


# ============================================
# TYPES
# ============================================


class ColumnKind(str, Enum):
    CONTINUOUS = "continuous"
    SYMBOLIC = "symbolic"


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values, copy=True)
    values.flags.writeable = False
    return values


@dataclass(frozen=True, eq=False)
class Column:
    """
    One named column.

    Continuous columns hold finite floats. Symbolic columns hold integer ids
    into ``categories``. ``indicator_of`` names the symbolic attribute a
    one-hot indicator column was derived from.
    """

    name: str
    kind: ColumnKind
    values: np.ndarray
    categories: Tuple[str, ...] = ()
    indicator_of: Optional[str] = None

    def __post_init__(self):
        if self.kind == ColumnKind.CONTINUOUS:
            values = np.asarray(self.values, dtype=float)
            if not np.all(np.isfinite(values)):
                raise DatasetValidationError(f"column '{self.name}' has non-finite values")
        else:
            values = np.asarray(self.values, dtype=np.int64)
            if not self.categories:
                raise DatasetValidationError(f"symbolic column '{self.name}' has no categories")
            if values.size and (values.min() < 0 or values.max() >= len(self.categories)):
                raise DatasetValidationError(
                    f"symbolic column '{self.name}' references an unknown category id"
                )
        object.__setattr__(self, "values", _frozen(values))
        object.__setattr__(self, "categories", tuple(self.categories))

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Column):
            return NotImplemented
        return (
            self.name == other.name
            and self.kind == other.kind
            and self.categories == other.categories
            and self.indicator_of == other.indicator_of
            and self.values.shape == other.values.shape
            and bool(np.array_equal(self.values, other.values))
        )

    @property
    def is_continuous(self) -> bool:
        return self.kind == ColumnKind.CONTINUOUS

    def labels(self) -> List[str]:
        """Category names per row (symbolic columns only)."""
        return [self.categories[i] for i in self.values]

    def take(self, rows: np.ndarray) -> "Column":
        return Column(self.name, self.kind, self.values[rows], self.categories, self.indicator_of)


@dataclass(frozen=True)
class FeatureScaling:
    """Per-feature normalization parameters."""

    name: str
    kind: ColumnKind
    minimum: float = 0.0
    maximum: float = 0.0
    categories: Tuple[str, ...] = ()

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "kind": self.kind.value,
            "minimum": self.minimum,
            "maximum": self.maximum,
            "categories": list(self.categories),
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "FeatureScaling":
        return cls(
            name=data["name"],
            kind=ColumnKind(data["kind"]),
            minimum=float(data["minimum"]),
            maximum=float(data["maximum"]),
            categories=tuple(data.get("categories", ())),
        )


@dataclass(frozen=True)
class NormalizationParams:
    """Everything needed to reapply or invert a normalization."""

    features: Tuple[FeatureScaling, ...]
    target_min: float
    target_max: float

    def to_dict(self) -> Dict:
        return {
            "features": [f.to_dict() for f in self.features],
            "target_min": self.target_min,
            "target_max": self.target_max,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "NormalizationParams":
        return cls(
            features=tuple(FeatureScaling.from_dict(f) for f in data["features"]),
            target_min=float(data["target_min"]),
            target_max=float(data["target_max"]),
        )


@dataclass(frozen=True, eq=False)
class Dataset:
    """A regression dataset: feature columns plus one continuous target."""

    name: str
    features: Tuple[Column, ...]
    target: Column
    normalized: bool = False
    normalization: Optional[NormalizationParams] = None

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))
        if not self.target.is_continuous:
            raise DatasetValidationError(f"target '{self.target.name}' is not numeric")
        n_rows = len(self.target)
        if n_rows < 1:
            raise DatasetValidationError(f"dataset '{self.name}' is empty")
        for column in self.features:
            if len(column) != n_rows:
                raise DatasetValidationError(
                    f"column '{column.name}' has {len(column)} rows, target has {n_rows}"
                )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.name == other.name
            and self.normalized == other.normalized
            and self.normalization == other.normalization
            and self.target == other.target
            and len(self.features) == len(other.features)
            and all(a == b for a, b in zip(self.features, other.features))
        )

    @property
    def n_rows(self) -> int:
        return len(self.target)

    @property
    def continuous_features(self) -> List[Column]:
        return [c for c in self.features if c.is_continuous and c.indicator_of is None]

    @property
    def symbolic_features(self) -> List[Column]:
        return [c for c in self.features if not c.is_continuous]

    def feature_matrix(self) -> np.ndarray:
        """All features as an (n_rows, n_features) float matrix. Requires no symbolic columns."""
        if self.symbolic_features:
            raise DatasetValidationError(
                f"dataset '{self.name}' still has symbolic columns; normalize it first"
            )
        if not self.features:
            return np.zeros((self.n_rows, 0))
        return np.column_stack([c.values for c in self.features]).astype(float)

    def take(self, rows: Sequence[int]) -> "Dataset":
        """Row subset, keeping columns and normalization state."""
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(
            name=self.name,
            features=tuple(c.take(rows) for c in self.features),
            target=self.target.take(rows),
            normalized=self.normalized,
            normalization=self.normalization,
        )


@dataclass(frozen=True)
class AdmissionReport:
    row_count: int
    distinct_target_values: int
    admitted: bool
    reasons: Tuple[str, ...] = field(default_factory=tuple)


# ============================================
# HELPER FUNCTIONS
# ============================================


def _symbolic_column(name: str, labels: Sequence[str], categories: Optional[Sequence[str]] = None) -> Column:
    """Build a symbolic column; categories default to the sorted observed labels."""
    if categories is None:
        categories = sorted(set(labels))
    index = {c: i for i, c in enumerate(categories)}
    unknown = [label for label in labels if label not in index]
    if unknown:
        raise DatasetValidationError(f"column '{name}' has undeclared category '{unknown[0]}'")
    return Column(name, ColumnKind.SYMBOLIC, np.array([index[v] for v in labels], dtype=np.int64), tuple(categories))


def _numeric_or_none(series: pd.Series) -> Optional[np.ndarray]:
    """Parse a string column as floats; None if any cell fails to parse."""
    parsed = pd.to_numeric(series, errors="coerce")
    if parsed.isna().any():
        return None
    return np.array([float(v) for v in series], dtype=float)


def _resolve_target(names: Sequence[str], target: Optional[str], path: PathLike) -> str:
    if target is None:
        return names[-1]
    if target not in names:
        raise DatasetParseError(str(path), f"target column '{target}' not found")
    return target


def _assemble(name: str, columns: Dict[str, Column], target: str) -> Dataset:
    target_column = columns[target]
    if not target_column.is_continuous:
        raise DatasetValidationError(f"target '{target}' is not numeric")
    features = tuple(col for key, col in columns.items() if key != target)
    return Dataset(name=name, features=features, target=target_column)


def _drop_missing(frame: pd.DataFrame, path: PathLike) -> pd.DataFrame:
    missing = frame.isna().any(axis=1)
    dropped = int(missing.sum())
    if dropped:
        logger.warning(f"[INGEST] {path}: dropped {dropped} row(s) with missing values")
    return frame.loc[~missing].reset_index(drop=True)


# ============================================
# LOADERS
# ============================================


def load_csv(path: PathLike, target: Optional[str] = None, name: Optional[str] = None) -> Dataset:
    """
    Load a CSV with a mandatory header row.

    A column is symbolic iff any non-missing cell fails numeric parsing.
    Rows containing missing markers ('' or '?') are dropped with a warning.
    If a schema sidecar exists next to the file, column kinds, categories
    and normalization state come from it instead; an explicit ``target`` or
    ``name`` that disagrees with the sidecar raises ConfigurationError.
    """
    path = Path(path)
    schema_file = sidecar_path(path, SCHEMA_SUFFIX)
    if schema_file.exists():
        schema = read_json(schema_file)
        for key, requested in (("target", target), ("name", name)):
            if requested is not None and requested != schema[key]:
                raise ConfigurationError(
                    f"{path}: {key} '{requested}' conflicts with '{schema[key]}' recorded in {schema_file.name}"
                )
        return load_canonical(path)

    try:
        frame = pd.read_csv(
            path,
            dtype=str,
            keep_default_na=False,
            na_values=MISSING_MARKERS,
            skipinitialspace=True,
            encoding="utf-8",
        )
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DatasetParseError(str(path), str(e)) from e

    if frame.shape[1] < 1:
        raise DatasetParseError(str(path), "no columns")
    frame = _drop_missing(frame, path)
    if frame.empty:
        raise DatasetValidationError(f"{path} has no complete rows")

    names = [str(c) for c in frame.columns]
    target_name = _resolve_target(names, target, path)

    columns: Dict[str, Column] = {}
    for column_name in names:
        raw = frame[column_name].str.strip()
        values = _numeric_or_none(raw)
        if values is not None:
            columns[column_name] = Column(column_name, ColumnKind.CONTINUOUS, values)
        else:
            columns[column_name] = _symbolic_column(column_name, list(raw))

    dataset = _assemble(name or sanitize_dataset_name(path.name), columns, target_name)
    logger.info(
        f"[INGEST] {path.name}: {dataset.n_rows} rows, {len(dataset.features)} features "
        f"({len(dataset.symbolic_features)} symbolic)"
    )
    return dataset


def load_arff(path: PathLike, target: Optional[str] = None, name: Optional[str] = None) -> Dataset:
    """
    Load a dense ARFF file with numeric/real/integer and nominal attributes.

    Any other attribute type (string, date, relational) is rejected. Rows
    with '?' are dropped with a counted warning.
    """
    path = Path(path)
    try:
        data, meta = arff.loadarff(str(path))
    except (arff.ParseArffError, NotImplementedError, ValueError, IndexError) as e:
        raise DatasetParseError(str(path), str(e)) from e

    names = list(meta.names())
    if not names:
        raise DatasetParseError(str(path), "no @attribute declarations")

    frame_data = {}
    declared: Dict[str, Tuple[str, ...]] = {}
    for attr in names:
        attr_type, attr_range = meta[attr]
        if attr_type in ARFF_NUMERIC_TYPES:
            frame_data[attr] = np.asarray(data[attr], dtype=float)
        elif attr_type in ARFF_NOMINAL_TYPES:
            labels = [v.decode("utf-8") if isinstance(v, bytes) else str(v) for v in data[attr]]
            frame_data[attr] = pd.Series(labels, dtype=object).replace("?", np.nan)
            declared[attr] = tuple(attr_range)
        else:
            raise DatasetParseError(str(path), f"unsupported attribute type '{attr_type}' for '{attr}'")

    frame = pd.DataFrame(frame_data, columns=names)
    frame = _drop_missing(frame, path)
    if frame.empty:
        raise DatasetValidationError(f"{path} has no complete rows")

    target_name = _resolve_target(names, target, path)
    columns: Dict[str, Column] = {}
    for attr in names:
        if attr in declared:
            columns[attr] = _symbolic_column(attr, list(frame[attr]), declared[attr])
        else:
            columns[attr] = Column(attr, ColumnKind.CONTINUOUS, frame[attr].to_numpy(dtype=float))

    dataset = _assemble(name or sanitize_dataset_name(meta.name or path.name), columns, target_name)
    logger.info(
        f"[INGEST] {path.name}: {dataset.n_rows} rows, {len(dataset.features)} features "
        f"({len(dataset.symbolic_features)} nominal)"
    )
    return dataset


def load_dataset(path: PathLike, fmt: Optional[str] = None, target: Optional[str] = None) -> Dataset:
    """
    Load a dataset file.

    Args:
        path: CSV or ARFF file
        fmt: 'csv' or 'arff'; inferred from the extension when omitted
        target: Target column name; last column by default

    Returns:
        Raw Dataset (or the stored state for canonical CSVs with a schema)
    """
    path = Path(path)
    if not path.exists():
        raise DatasetParseError(str(path), "file not found")
    fmt = fmt or SUPPORTED_FORMATS.get(path.suffix.lower())
    if fmt == "csv":
        return load_csv(path, target=target)
    if fmt == "arff":
        return load_arff(path, target=target, name=sanitize_dataset_name(path.name))
    raise DatasetParseError(str(path), f"unsupported format '{fmt or path.suffix}'")


def list_corpus_files(directory: PathLike) -> List[Path]:
    """CSV/ARFF files of a corpus directory, sorted by file name."""
    directory = Path(directory)
    if not directory.is_dir():
        raise DatasetParseError(str(directory), "corpus directory not found")
    return sorted(p for p in directory.iterdir() if p.suffix.lower() in SUPPORTED_FORMATS)


def load_corpus(directory: PathLike, target: Optional[str] = None) -> List[Dataset]:
    """Load every CSV/ARFF file in a directory, sorted by file name."""
    return [load_dataset(p, target=target) for p in list_corpus_files(directory)]


# ============================================
# CANONICAL FORM
# ============================================


def save_dataset(dataset: Dataset, path: PathLike) -> Path:
    """
    Write the canonical form: CSV body plus a JSON schema sidecar recording
    column kinds, categories, indicator origins and normalization parameters.
    """
    path = Path(path)
    columns = list(dataset.features) + [dataset.target]
    header = [c.name for c in columns]
    cells = [c.labels() if not c.is_continuous else [float(v) for v in c.values] for c in columns]
    write_csv(path, header, zip(*cells))

    schema = {
        "name": dataset.name,
        "target": dataset.target.name,
        "normalized": dataset.normalized,
        "normalization": dataset.normalization.to_dict() if dataset.normalization else None,
        "columns": [
            {
                "name": c.name,
                "kind": c.kind.value,
                "categories": list(c.categories),
                "indicator_of": c.indicator_of,
            }
            for c in columns
        ],
    }
    write_json(sidecar_path(path, SCHEMA_SUFFIX), schema)
    return path


def load_canonical(path: PathLike) -> Dataset:
    """Read a dataset written by ``save_dataset``."""
    path = Path(path)
    schema = read_json(sidecar_path(path, SCHEMA_SUFFIX))
    specs = schema["columns"]
    try:
        frame = read_csv_table(path, [s["name"] for s in specs])
    except TableLayoutError as e:
        raise DatasetParseError(str(path), f"line {e.line}: {e.details}") from e

    columns: Dict[str, Column] = {}
    for spec in specs:
        raw = list(frame[spec["name"]])
        kind = ColumnKind(spec["kind"])
        if kind == ColumnKind.CONTINUOUS:
            try:
                values = np.array([float(v) for v in raw], dtype=float)
            except ValueError as e:
                raise DatasetParseError(str(path), f"column '{spec['name']}': {e}") from e
            columns[spec["name"]] = Column(
                spec["name"], kind, values, indicator_of=spec.get("indicator_of")
            )
        else:
            columns[spec["name"]] = _symbolic_column(spec["name"], raw, spec["categories"])

    target = columns.pop(schema["target"])
    normalization = schema.get("normalization")
    return Dataset(
        name=schema["name"],
        features=tuple(columns.values()),
        target=target,
        normalized=bool(schema["normalized"]),
        normalization=NormalizationParams.from_dict(normalization) if normalization else None,
    )


# ============================================
# ADMISSION
# ============================================


def check_admission(dataset: Dataset) -> AdmissionReport:
    """
    Corpus admission: at least MIN_ROWS rows and MIN_DISTINCT_TARGETS distinct targets.
    """
    row_count = dataset.n_rows
    distinct = int(np.unique(dataset.target.values).size)
    reasons = []
    if row_count < MIN_ROWS:
        reasons.append(f"row count {row_count} < {MIN_ROWS}")
    if distinct < MIN_DISTINCT_TARGETS:
        reasons.append(f"distinct target values {distinct} < {MIN_DISTINCT_TARGETS}")
    return AdmissionReport(
        row_count=row_count,
        distinct_target_values=distinct,
        admitted=not reasons,
        reasons=tuple(reasons),
    )
