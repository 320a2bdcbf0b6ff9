"""
Linear meta-learner: ordinary least squares with intercept.
"""

from typing import Dict

import numpy as np
from loguru import logger
from sklearn.linear_model import LinearRegression, Ridge

from config import RIDGE_FALLBACK
from learners.base import MetaRegressor


def design_rank(Z: np.ndarray) -> int:
    """Rank of [1 | Z]."""
    return int(np.linalg.matrix_rank(np.column_stack([np.ones(Z.shape[0]), Z])))


class LinearRegressor(MetaRegressor):
    """OLS; a rank-deficient design falls back to ridge with a tiny penalty."""

    family = "linear"

    def _fit(self, Z: np.ndarray, y: np.ndarray) -> list:
        warnings = []
        if design_rank(Z) < Z.shape[1] + 1:
            logger.warning(f"[LEARNER] {self.name}: rank-deficient design, ridge fallback (alpha={RIDGE_FALLBACK})")
            warnings.append("ridge_fallback")
            estimator = Ridge(alpha=RIDGE_FALLBACK, solver="svd").fit(Z, y)
        else:
            estimator = LinearRegression().fit(Z, y)
        self.intercept = float(estimator.intercept_)
        self.coefficients = np.asarray(estimator.coef_, dtype=float)
        return warnings

    def _predict(self, Z: np.ndarray) -> np.ndarray:
        return self.intercept + Z @ self.coefficients

    def _state_dict(self) -> Dict:
        return {"intercept": self.intercept, "coefficients": self.coefficients.tolist()}

    def _load_state(self, state: Dict) -> None:
        self.intercept = float(state["intercept"])
        self.coefficients = np.array(state["coefficients"], dtype=float)
