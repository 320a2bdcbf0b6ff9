"""
Support Vector Regression meta-learner.

The epsilon-insensitive dual is solved by libsvm (``sklearn.svm.SVR``) on
min-max scaled features and min-max scaled labels. Only the support vectors,
their dual coefficients and the intercept are kept; prediction evaluates the
kernel expansion directly so a reloaded model reproduces it bit for bit.
"""

from dataclasses import dataclass
from typing import Dict, NamedTuple

import numpy as np
from loguru import logger
from sklearn.metrics.pairwise import polynomial_kernel, rbf_kernel
from sklearn.svm import SVR

from config import N_META_FEATURES, SVR_C, SVR_EPSILON, SVR_POLY_COEF0, SVR_POLY_DEGREE, SVR_TOLERANCE
from exceptions import ConfigurationError
from learners.base import MetaRegressor

KERNELS = ("poly", "rbf")


@dataclass(frozen=True)
class SvrParams:
    kernel: str = "rbf"
    degree: int = SVR_POLY_DEGREE
    coef0: float = SVR_POLY_COEF0
    gamma: float = 0.1
    C: float = SVR_C
    epsilon: float = SVR_EPSILON
    tolerance: float = SVR_TOLERANCE

    def validate(self) -> "SvrParams":
        if self.kernel not in KERNELS:
            raise ConfigurationError(f"SVR kernel must be one of {KERNELS}, got '{self.kernel}'")
        if self.C <= 0:
            raise ConfigurationError(f"SVR C must be > 0, got {self.C}")
        if self.epsilon < 0:
            raise ConfigurationError(f"SVR epsilon must be >= 0, got {self.epsilon}")
        if self.gamma <= 0:
            raise ConfigurationError(f"SVR gamma must be > 0, got {self.gamma}")
        if self.degree < 1:
            raise ConfigurationError(f"SVR degree must be >= 1, got {self.degree}")
        if self.tolerance <= 0:
            raise ConfigurationError(f"SVR tolerance must be > 0, got {self.tolerance}")
        return self

    def to_dict(self) -> Dict:
        data = {"kernel": self.kernel, "C": self.C, "epsilon": self.epsilon, "tolerance": self.tolerance}
        if self.kernel == "poly":
            data.update(degree=self.degree, coef0=self.coef0)
        else:
            data["gamma"] = self.gamma
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "SvrParams":
        unknown = set(data) - {"kernel", "degree", "coef0", "gamma", "C", "epsilon", "tolerance"}
        if unknown:
            raise ConfigurationError(f"unexpected SVR parameters: {', '.join(sorted(unknown))}")
        return cls(
            kernel=str(data.get("kernel", "rbf")),
            degree=int(data.get("degree", SVR_POLY_DEGREE)),
            coef0=float(data.get("coef0", SVR_POLY_COEF0)),
            gamma=float(data.get("gamma", 0.1)),
            C=float(data.get("C", SVR_C)),
            epsilon=float(data.get("epsilon", SVR_EPSILON)),
            tolerance=float(data.get("tolerance", SVR_TOLERANCE)),
        ).validate()


class KktReport(NamedTuple):
    max_abs_coefficient: float
    box_violations: int
    inside_tube_violations: int

    @property
    def ok(self) -> bool:
        return self.box_violations == 0 and self.inside_tube_violations == 0


class SupportVectorRegressor(MetaRegressor):
    family = "svr"
    params_type = SvrParams

    def kernel(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        p = self.params
        if p.kernel == "poly":
            # gamma stays 1 so degree 1 with coef0 0 is the plain dot product
            return polynomial_kernel(A, B, degree=p.degree, gamma=1.0, coef0=p.coef0)
        return rbf_kernel(A, B, gamma=p.gamma)

    def _fit(self, Z: np.ndarray, y: np.ndarray) -> list:
        self.label_min = float(y.min())
        self.label_span = float(np.ptp(y))
        if self.label_span == 0:
            self.support_indices = np.zeros(0, dtype=int)
            self.support_vectors = np.zeros((0, Z.shape[1]))
            self.dual_coefficients = np.zeros(0)
            self.intercept = 0.0
            return []

        p = self.params
        solver = SVR(
            kernel=p.kernel,
            degree=p.degree,
            gamma=1.0 if p.kernel == "poly" else p.gamma,
            coef0=p.coef0,
            C=p.C,
            epsilon=p.epsilon,
            tol=p.tolerance,
        ).fit(Z, self._scale_labels(y))
        self.support_indices = np.asarray(solver.support_, dtype=int)
        self.support_vectors = Z[self.support_indices].copy()
        self.dual_coefficients = np.asarray(solver.dual_coef_[0], dtype=float)
        self.intercept = float(solver.intercept_[0])
        logger.debug(f"[LEARNER] {self.name}: {self.support_indices.size} support vector(s) of {Z.shape[0]}")
        return []

    def _scale_labels(self, y: np.ndarray) -> np.ndarray:
        return (y - self.label_min) / self.label_span

    def decision_function(self, Z: np.ndarray) -> np.ndarray:
        """Prediction in scaled label units."""
        if self.support_vectors.shape[0] == 0:
            return np.full(Z.shape[0], self.intercept)
        return self.kernel(Z, self.support_vectors) @ self.dual_coefficients + self.intercept

    def _predict(self, Z: np.ndarray) -> np.ndarray:
        return self.label_min + self.label_span * self.decision_function(Z)

    def kkt_report(self, X: np.ndarray, y: np.ndarray) -> KktReport:
        """
        Check the dual solution against its training data.

        Every coefficient must lie in [-C, C]; an example strictly inside the
        epsilon tube (by more than twice the solver tolerance) must have coefficient 0.
        """
        p = self.params
        Z = self._inputs(np.asarray(X, dtype=float))
        residual = np.abs(self.decision_function(Z) - self._scale_labels(np.asarray(y, dtype=float)))
        coefficients = np.zeros(Z.shape[0])
        coefficients[self.support_indices] = self.dual_coefficients

        slack = p.tolerance * max(1.0, p.C)
        box = int(np.sum(np.abs(coefficients) > p.C + slack))
        inside = residual < p.epsilon - 2 * p.tolerance
        tube = int(np.sum(inside & (np.abs(coefficients) > slack)))
        max_coef = float(np.abs(coefficients).max()) if coefficients.size else 0.0
        return KktReport(max_abs_coefficient=max_coef, box_violations=box, inside_tube_violations=tube)

    def _state_dict(self) -> Dict:
        return {
            "label_min": self.label_min,
            "label_span": self.label_span,
            "support_indices": self.support_indices.tolist(),
            "support_vectors": self.support_vectors.tolist(),
            "dual_coefficients": self.dual_coefficients.tolist(),
            "intercept": self.intercept,
        }

    def _load_state(self, state: Dict) -> None:
        self.label_min = float(state["label_min"])
        self.label_span = float(state["label_span"])
        self.support_indices = np.array(state["support_indices"], dtype=int)
        self.support_vectors = np.array(state["support_vectors"], dtype=float).reshape(-1, N_META_FEATURES)
        self.dual_coefficients = np.array(state["dual_coefficients"], dtype=float)
        self.intercept = float(state["intercept"])
