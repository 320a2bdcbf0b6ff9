"""
Reference meta-learners that ignore the meta-feature/label relationship.
"""

from typing import Dict

import numpy as np

from features.meta_features import FEATURE_NAMES
from learners.base import MetaRegressor

N_ATTRIBUTES_INDEX = FEATURE_NAMES.index("n_attributes")


class MeanRegressor(MetaRegressor):
    """Predicts the training mean label; the yardstick of relative absolute error."""

    family = "mean"
    min_examples = 1
    uses_scaling = False

    def _fit(self, Z: np.ndarray, y: np.ndarray) -> list:
        self.value = float(np.mean(y))
        return []

    def _predict(self, Z: np.ndarray) -> np.ndarray:
        return np.full(Z.shape[0], self.value)

    def _state_dict(self) -> Dict:
        return {"value": self.value}

    def _load_state(self, state: Dict) -> None:
        self.value = float(state["value"])


class HeuristicRegressor(MetaRegressor):
    """Rule of thumb: halfway between the output count (1) and the input count."""

    family = "heuristic"
    min_examples = 1
    uses_scaling = False

    def _fit(self, Z: np.ndarray, y: np.ndarray) -> list:
        return []

    def _predict(self, Z: np.ndarray) -> np.ndarray:
        return (Z[:, N_ATTRIBUTES_INDEX] + 1.0) / 2.0

    def _state_dict(self) -> Dict:
        return {}

    def _load_state(self, state: Dict) -> None:
        pass
