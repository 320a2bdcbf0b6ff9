"""
Meta-Regressor base - shared fit/predict plumbing for every learner family.

Features are min-max scaled with ranges learned at fit time; the stored
scale and offset are applied identically at prediction and after a
save/load round-trip.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, ClassVar, Dict, Optional, Tuple, Type

import numpy as np
from loguru import logger
from sklearn.preprocessing import MinMaxScaler

from config import N_META_FEATURES, SWEEP_N_MAX, SWEEP_N_MIN
from exceptions import ConfigurationError, MetaLearnerError, ShapeMismatchError


@dataclass(frozen=True)
class NoParams:
    """Parameter set of families that take no parameters."""

    def validate(self) -> "NoParams":
        return self

    def to_dict(self) -> Dict:
        return {}

    @classmethod
    def from_dict(cls, data: Dict) -> "NoParams":
        if data:
            raise ConfigurationError(f"unexpected learner parameters: {', '.join(sorted(data))}")
        return cls()


@dataclass(frozen=True, eq=False)
class FeatureScaler:
    """x' = x * scale + offset, mapping training ranges onto [0, 1]; constant columns map to 0."""

    scale: np.ndarray
    offset: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray) -> "FeatureScaler":
        scaler = MinMaxScaler().fit(X)
        return cls(scale=scaler.scale_.astype(float), offset=scaler.min_.astype(float))

    def transform(self, X: np.ndarray) -> np.ndarray:
        return X * self.scale + self.offset

    def to_dict(self) -> Dict:
        return {"scale": self.scale.tolist(), "offset": self.offset.tolist()}

    @classmethod
    def from_dict(cls, data: Dict) -> "FeatureScaler":
        return cls(
            scale=np.array(data["scale"], dtype=float),
            offset=np.array(data["offset"], dtype=float),
        )


class MetaRegressor(ABC):
    """
    A regressor from 16 meta-features to a hidden-neuron count.

    Subclasses implement ``_fit`` on scaled features and ``_predict``; the
    instance is frozen once ``fit`` (or ``from_dict``) completes.
    """

    family: ClassVar[str] = ""
    params_type: ClassVar[Type] = NoParams
    min_examples: ClassVar[int] = 2
    uses_scaling: ClassVar[bool] = True

    def __init__(self, name: str, params: Any = None):
        self.name = name
        self.params = (params or self.params_type()).validate()
        self.scaler: Optional[FeatureScaler] = None
        self.label_range: Tuple[int, int] = (SWEEP_N_MIN, SWEEP_N_MAX)
        self.config_hash: Optional[str] = None
        self.n_train = 0
        self.warnings: Tuple[str, ...] = ()
        self._frozen = False

    def __setattr__(self, key, value):
        if getattr(self, "_frozen", False):
            raise AttributeError(f"fitted {self.family} model is immutable")
        super().__setattr__(key, value)

    @property
    def is_fitted(self) -> bool:
        return self._frozen

    # ============================================
    # FIT / PREDICT
    # ============================================

    def fit(
        self,
        X: np.ndarray,
        y: np.ndarray,
        label_range: Tuple[int, int] = (SWEEP_N_MIN, SWEEP_N_MAX),
        config_hash: Optional[str] = None,
    ) -> "MetaRegressor":
        if self._frozen:
            raise MetaLearnerError(f"{self.name} is already fitted")
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        if X.ndim != 2 or X.shape[1] != N_META_FEATURES:
            raise ShapeMismatchError(N_META_FEATURES, X.shape[-1] if X.ndim else 0, "meta-feature count")
        if X.shape[0] != y.shape[0]:
            raise ShapeMismatchError(X.shape[0], y.shape[0], "label count")
        if X.shape[0] < self.min_examples:
            raise MetaLearnerError(
                f"{self.name} needs at least {self.min_examples} meta-example(s), got {X.shape[0]}"
            )

        warnings = []
        if np.ptp(y) == 0 and self.family in ("linear", "svr"):
            warnings.append("constant_labels")
            logger.warning(f"[LEARNER] {self.name}: constant labels, model degenerates to a constant")

        self.scaler = FeatureScaler.fit(X)
        self.label_range = (int(label_range[0]), int(label_range[1]))
        self.config_hash = config_hash
        self.n_train = int(X.shape[0])
        warnings.extend(self._fit(self._inputs(X), y))
        self.warnings = tuple(warnings)
        self._frozen = True
        return self

    def predict_raw(self, X: np.ndarray) -> np.ndarray:
        """Real-valued predictions, one per row of ``X``."""
        if not self._frozen:
            raise MetaLearnerError(f"{self.name} is not fitted")
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != N_META_FEATURES:
            raise ShapeMismatchError(N_META_FEATURES, X.shape[1], "meta-feature count")
        return np.asarray(self._predict(self._inputs(X)), dtype=float)

    def _inputs(self, X: np.ndarray) -> np.ndarray:
        return self.scaler.transform(X) if self.uses_scaling else X

    @abstractmethod
    def _fit(self, Z: np.ndarray, y: np.ndarray) -> list:
        """Fit on (scaled) inputs; return extra warning codes."""

    @abstractmethod
    def _predict(self, Z: np.ndarray) -> np.ndarray:
        ...

    # ============================================
    # PERSISTENCE
    # ============================================

    @abstractmethod
    def _state_dict(self) -> Dict:
        ...

    @abstractmethod
    def _load_state(self, state: Dict) -> None:
        ...

    def to_dict(self) -> Dict:
        return {
            "family": self.family,
            "name": self.name,
            "params": self.params.to_dict(),
            "scaler": self.scaler.to_dict(),
            "label_range": list(self.label_range),
            "config_hash": self.config_hash,
            "n_train": self.n_train,
            "warnings": list(self.warnings),
            "state": self._state_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "MetaRegressor":
        model = cls(data["name"], cls.params_type.from_dict(data.get("params", {})))
        model.scaler = FeatureScaler.from_dict(data["scaler"])
        model.label_range = tuple(int(v) for v in data["label_range"])
        model.config_hash = data.get("config_hash")
        model.n_train = int(data.get("n_train", 0))
        model.warnings = tuple(data.get("warnings", ()))
        model._load_state(data["state"])
        model._frozen = True
        return model
