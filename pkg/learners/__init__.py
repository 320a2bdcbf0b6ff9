"""
Meta-learner registry: families, named presets, fitting, recommendation and persistence.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Type, Union

import numpy as np
from loguru import logger

from config import SVR_RBF_GAMMAS
from exceptions import ConfigHashMismatchError, ConfigurationError, MetaLearnerError, UnknownFamilyError
from features.meta_features import MetaFeatureVector
from learners.base import FeatureScaler, MetaRegressor, NoParams
from learners.baselines import HeuristicRegressor, MeanRegressor
from learners.knn import NearestNeighborRegressor
from learners.linear import LinearRegressor
from learners.m5 import M5Params, ModelTreeRegressor
from learners.svr import SupportVectorRegressor, SvrParams
from metabase.store import MetaBase
from utils.files import PathLike, config_hash, read_json, write_json

FAMILIES: Dict[str, Type[MetaRegressor]] = {
    cls.family: cls
    for cls in (
        NearestNeighborRegressor,
        LinearRegressor,
        ModelTreeRegressor,
        SupportVectorRegressor,
        MeanRegressor,
        HeuristicRegressor,
    )
}


@dataclass(frozen=True)
class LearnerSpec:
    """A named (family, parameters) pair, e.g. ``svr-rbf-0.1``."""

    name: str
    family: str
    params: Dict = field(default_factory=dict)

    def validate(self) -> "LearnerSpec":
        self.build_params()
        return self

    def family_class(self) -> Type[MetaRegressor]:
        if self.family not in FAMILIES:
            raise UnknownFamilyError(self.family)
        return FAMILIES[self.family]

    def build_params(self):
        return self.family_class().params_type.from_dict(dict(self.params)).validate()

    def to_dict(self) -> Dict:
        return {"name": self.name, "family": self.family, "params": self.build_params().to_dict()}

    @classmethod
    def from_dict(cls, data: Dict) -> "LearnerSpec":
        if "family" not in data:
            raise ConfigurationError(f"learner entry without family: {data}")
        family = str(data["family"])
        return cls(name=str(data.get("name", family)), family=family, params=dict(data.get("params", {}))).validate()

    def hash(self) -> str:
        return config_hash(self.to_dict())


PRESETS: Dict[str, LearnerSpec] = {
    "knn1": LearnerSpec("knn1", "knn1"),
    "linear": LearnerSpec("linear", "linear"),
    "m5": LearnerSpec("m5", "m5"),
    "svr-poly": LearnerSpec("svr-poly", "svr", {"kernel": "poly"}),
    **{
        f"svr-rbf-{gamma:g}": LearnerSpec(f"svr-rbf-{gamma:g}", "svr", {"kernel": "rbf", "gamma": gamma})
        for gamma in SVR_RBF_GAMMAS
    },
    "mean": LearnerSpec("mean", "mean"),
    "heuristic": LearnerSpec("heuristic", "heuristic"),
}


def resolve_learner(learner: Union[str, LearnerSpec, Dict]) -> LearnerSpec:
    """Accept a preset name, a bare family name, a spec dict or a LearnerSpec."""
    if isinstance(learner, LearnerSpec):
        return learner.validate()
    if isinstance(learner, dict):
        return LearnerSpec.from_dict(learner)
    if learner in PRESETS:
        return PRESETS[learner]
    if learner in FAMILIES:
        return LearnerSpec(learner, learner).validate()
    raise UnknownFamilyError(learner)


# ============================================
# FIT / PREDICT
# ============================================


def fit_arrays(
    learner: Union[str, LearnerSpec, Dict],
    X: np.ndarray,
    y: np.ndarray,
    label_range: Tuple[int, int],
    feature_hash: Optional[str] = None,
) -> MetaRegressor:
    spec = resolve_learner(learner)
    model = spec.family_class()(spec.name, spec.build_params())
    return model.fit(X, y, label_range=label_range, config_hash=feature_hash)


def fit(family: Union[str, LearnerSpec, Dict], params: Optional[Dict], metabase: MetaBase) -> MetaRegressor:
    """
    Fit a meta-learner on a whole meta-base.

    Args:
        family: Family name, preset name or LearnerSpec
        params: Family parameters overriding the preset's (None keeps them)
        metabase: Training meta-examples

    Returns:
        Fitted, immutable MetaRegressor carrying the meta-base's label range and feature-config hash
    """
    if len(metabase) == 0:
        raise MetaLearnerError("cannot fit on an empty meta-base")
    spec = resolve_learner(family)
    if params:
        spec = LearnerSpec(spec.name, spec.family, {**spec.params, **params}).validate()
    model = fit_arrays(spec, metabase.feature_matrix, metabase.labels, metabase.label_range, metabase.feature_config_hash)
    logger.info(f"[LEARNER] fitted {spec.name} on {len(metabase)} meta-example(s)")
    return model


def _check_hash(model: MetaRegressor, vector: MetaFeatureVector) -> None:
    if model.config_hash and vector.config_hash and model.config_hash != vector.config_hash:
        raise ConfigHashMismatchError(model.config_hash, vector.config_hash)


def predict_raw(model: MetaRegressor, vector: MetaFeatureVector) -> float:
    _check_hash(model, vector)
    return float(model.predict_raw(vector.as_array()[None, :])[0])


def round_and_clamp(raw: float, label_range: Tuple[int, int]) -> int:
    """Nearest integer (halves round up) clamped to the label range."""
    n_min, n_max = label_range
    return int(min(max(np.floor(raw + 0.5), n_min), n_max))


def recommend(model: MetaRegressor, vector: MetaFeatureVector) -> int:
    """Recommended hidden-neuron count for one dataset."""
    return round_and_clamp(predict_raw(model, vector), model.label_range)


# ============================================
# PERSISTENCE
# ============================================


def save_model(model: MetaRegressor, path: PathLike) -> Path:
    return write_json(path, model.to_dict())


def model_from_dict(data: Dict) -> MetaRegressor:
    family = data.get("family")
    if family not in FAMILIES:
        raise UnknownFamilyError(str(family))
    return FAMILIES[family].from_dict(data)


def load_model(path: PathLike) -> MetaRegressor:
    return model_from_dict(read_json(path))


def available_learners() -> List[str]:
    return list(PRESETS)


__all__ = [
    "FAMILIES",
    "PRESETS",
    "FeatureScaler",
    "LearnerSpec",
    "M5Params",
    "MetaRegressor",
    "NoParams",
    "SvrParams",
    "available_learners",
    "fit",
    "fit_arrays",
    "load_model",
    "model_from_dict",
    "predict_raw",
    "recommend",
    "resolve_learner",
    "round_and_clamp",
    "save_model",
]
