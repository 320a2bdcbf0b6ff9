"""
Meta-Base Store - meta-examples (16 meta-features + best hidden-neuron count).

On disk a meta-base is a hand-inspectable CSV (dataset, 16 features, label)
plus a JSON provenance sidecar (schema version, extractor config and hash,
sweep config, label range, skipped names).
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from config import METABASE_META_SUFFIX, METABASE_SCHEMA_VERSION, N_META_FEATURES, TOOL_VERSION
from exceptions import (
    DuplicateNameError,
    MetaBaseError,
    MetaBaseSchemaError,
    MetaBaseVersionError,
    TableLayoutError,
)
from features.meta_features import FEATURE_NAMES, FeatureConfig, MetaFeatureVector
from search.label_search import SweepLabel, SweepResult
from utils.files import PathLike, read_csv_table, read_json, sidecar_path, table_rows, write_csv, write_json

HEADER = ["dataset", *FEATURE_NAMES, "label"]


@dataclass(frozen=True)
class MetaExample:
    dataset_name: str
    features: Tuple[float, ...]
    label: int

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(float(v) for v in self.features))
        if len(self.features) != N_META_FEATURES:
            raise MetaBaseError(f"meta-example '{self.dataset_name}' has {len(self.features)} features")


@dataclass(frozen=True)
class MetaBase:
    examples: Tuple[MetaExample, ...]
    provenance: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "examples", tuple(self.examples))
        names = [e.dataset_name for e in self.examples]
        if len(set(names)) != len(names):
            duplicate = next(n for n in names if names.count(n) > 1)
            raise DuplicateNameError(duplicate, "meta-base")

    def __len__(self) -> int:
        return len(self.examples)

    @property
    def names(self) -> List[str]:
        return [e.dataset_name for e in self.examples]

    @property
    def feature_matrix(self) -> np.ndarray:
        return np.array([e.features for e in self.examples], dtype=float).reshape(len(self), N_META_FEATURES)

    @property
    def labels(self) -> np.ndarray:
        return np.array([e.label for e in self.examples], dtype=float)

    @property
    def label_range(self) -> Tuple[int, int]:
        n_min, n_max = self.provenance.get("label_range", (1, 300))
        return int(n_min), int(n_max)

    @property
    def feature_config_hash(self) -> Optional[str]:
        return self.provenance.get("feature_config_hash")


LabelSource = Union[SweepResult, SweepLabel]


def _as_label(source: LabelSource) -> SweepLabel:
    return source.label() if isinstance(source, SweepResult) else source


def build_metabase(
    features: Sequence[Tuple[str, MetaFeatureVector]],
    sweeps: Sequence[LabelSource],
    feature_config: Optional[FeatureConfig] = None,
    sweep_config: Optional[Dict[str, Any]] = None,
) -> MetaBase:
    """
    Inner-join meta-features and sweep labels on dataset name.

    Args:
        features: (dataset name, vector) pairs
        sweeps: SweepResults or summary rows carrying best_count and the label range
        feature_config: Extractor config recorded in the provenance
        sweep_config: Sweep config recorded in the provenance

    Returns:
        MetaBase with examples sorted by dataset name; names found in only
        one input are listed under provenance['skipped']
    """
    feature_map: Dict[str, MetaFeatureVector] = {}
    for name, vector in features:
        if name in feature_map:
            raise DuplicateNameError(name, "meta-features")
        feature_map[name] = vector

    label_map: Dict[str, SweepLabel] = {}
    for source in sweeps:
        label = _as_label(source)
        if label.dataset_name in label_map:
            raise DuplicateNameError(label.dataset_name, "sweep results")
        label_map[label.dataset_name] = label
        if sweep_config is None and isinstance(source, SweepResult):
            sweep_config = source.config.to_dict()

    joined = sorted(set(feature_map) & set(label_map))
    if not joined:
        raise MetaBaseError("meta-features and sweep labels share no dataset name")
    skipped = sorted(set(feature_map) ^ set(label_map))
    if skipped:
        logger.warning(f"[METABASE] skipped {len(skipped)} unmatched dataset(s): {', '.join(skipped)}")

    ranges = {(label_map[n].n_min, label_map[n].n_max) for n in joined}
    if len(ranges) != 1:
        raise MetaBaseError(f"sweep labels come from different ranges: {sorted(ranges)}")
    label_range = ranges.pop()

    feature_config = feature_config or FeatureConfig()
    config_hash = feature_config.hash()
    stray = {feature_map[n].config_hash for n in joined} - {None, config_hash}
    if stray:
        raise MetaBaseError(f"meta-features were extracted with another config ({', '.join(sorted(stray))})")

    examples = []
    for name in joined:
        label = label_map[name].best_count
        if not label_range[0] <= label <= label_range[1]:
            raise MetaBaseError(f"label {label} of '{name}' outside {label_range}")
        examples.append(MetaExample(name, feature_map[name].values, label))

    provenance = {
        "schema_version": METABASE_SCHEMA_VERSION,
        "tool_version": TOOL_VERSION,
        "feature_names": list(FEATURE_NAMES),
        "feature_config": feature_config.to_dict(),
        "feature_config_hash": config_hash,
        "sweep_config": sweep_config,
        "label_range": list(label_range),
        "skipped": skipped,
    }
    logger.info(f"[METABASE] built {len(examples)} meta-example(s)")
    return MetaBase(examples=tuple(examples), provenance=provenance)


def save_metabase(metabase: MetaBase, path: PathLike) -> Path:
    """Write metabase CSV and its provenance sidecar."""
    path = Path(path)
    rows = [(e.dataset_name, *e.features, e.label) for e in metabase.examples]
    write_csv(path, HEADER, rows)
    write_json(sidecar_path(path, METABASE_META_SUFFIX), metabase.provenance)
    return path


def load_metabase(path: PathLike) -> MetaBase:
    """
    Read a meta-base written by ``save_metabase``.

    Raises:
        MetaBaseVersionError: header schema version differs
        MetaBaseSchemaError: a row has the wrong number of columns or bad numbers
    """
    path = Path(path)
    meta_path = sidecar_path(path, METABASE_META_SUFFIX)
    if not meta_path.exists():
        raise MetaBaseError(f"provenance file {meta_path} not found")
    provenance = read_json(meta_path)
    version = provenance.get("schema_version")
    if version != METABASE_SCHEMA_VERSION:
        raise MetaBaseVersionError(version, METABASE_SCHEMA_VERSION)

    try:
        frame = read_csv_table(path, HEADER)
    except TableLayoutError as e:
        if e.line > 1 and e.n_fields is not None:
            raise MetaBaseSchemaError(e.line, f"{e.n_fields - 2} feature columns, expected {N_META_FEATURES}") from e
        raise MetaBaseSchemaError(e.line, e.details) from e

    examples = []
    for line_no, row in table_rows(frame):
        try:
            features = tuple(float(v) for v in row[1:-1])
            label = int(row[-1])
        except ValueError as e:
            raise MetaBaseSchemaError(line_no, str(e)) from e
        examples.append(MetaExample(row[0], features, label))

    return MetaBase(examples=tuple(examples), provenance=provenance)


def label_mean(metabase: MetaBase) -> float:
    """Mean meta-label (the naive predictor's constant)."""
    if len(metabase) == 0:
        raise MetaBaseError("meta-base is empty")
    return float(np.mean(metabase.labels))
