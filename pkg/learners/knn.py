"""
1-Nearest-Neighbor meta-learner.
"""

from typing import Dict

import numpy as np
from scipy.spatial.distance import cdist

from learners.base import MetaRegressor


class NearestNeighborRegressor(MetaRegressor):
    """Label of the closest scaled training vector (Euclidean); ties go to the lowest training index."""

    family = "knn1"
    min_examples = 1

    def _fit(self, Z: np.ndarray, y: np.ndarray) -> list:
        self.train_inputs = Z.copy()
        self.train_labels = y.copy()
        return []

    def nearest_index(self, Z: np.ndarray) -> np.ndarray:
        distances = cdist(np.atleast_2d(Z), self.train_inputs, metric="euclidean")
        return np.argmin(distances, axis=1)

    def _predict(self, Z: np.ndarray) -> np.ndarray:
        return self.train_labels[self.nearest_index(Z)]

    def _state_dict(self) -> Dict:
        return {
            "train_inputs": self.train_inputs.tolist(),
            "train_labels": self.train_labels.tolist(),
        }

    def _load_state(self, state: Dict) -> None:
        self.train_inputs = np.array(state["train_inputs"], dtype=float)
        self.train_labels = np.array(state["train_labels"], dtype=float)
