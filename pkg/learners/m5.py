"""
M5 model-tree meta-learner.

Growth: binary splits chosen by standard-deviation reduction (SDR), both
sides holding at least ``min_leaf`` examples; a node stops splitting below
2 * min_leaf examples or when its label deviation falls under a fixed share
of the root's.

Models: every node carries a linear model. Leaves regress on all
attributes, interior nodes on the attributes tested in their subtree.

Pruning (``prune=True``): each model is simplified by greedy attribute
elimination, then a subtree is replaced by its node model whenever the
model's estimated error is no worse. Estimated error is the mean absolute
residual times (n + v) / (n - v), v being the number of model parameters.

Prediction: the leaf output is smoothed on the way back to the root,
p' = (n p + k q) / (n + k), n being the training count below the child
and q the parent model's output.
"""

from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from config import M5_MIN_LEAF, M5_SD_FRACTION, M5_SMALL_NODE_FACTOR, M5_SMOOTHING_K
from exceptions import ConfigurationError
from learners.base import MetaRegressor


@dataclass(frozen=True)
class M5Params:
    min_leaf: int = M5_MIN_LEAF
    smoothing_k: float = M5_SMOOTHING_K
    prune: bool = True

    def validate(self) -> "M5Params":
        if self.min_leaf < 2:
            raise ConfigurationError(f"M5 min_leaf must be >= 2, got {self.min_leaf}")
        if self.smoothing_k < 0:
            raise ConfigurationError(f"M5 smoothing_k must be >= 0, got {self.smoothing_k}")
        return self

    def to_dict(self) -> Dict:
        return {"min_leaf": self.min_leaf, "smoothing_k": self.smoothing_k, "prune": self.prune}

    @classmethod
    def from_dict(cls, data: Dict) -> "M5Params":
        unknown = set(data) - {"min_leaf", "smoothing_k", "prune"}
        if unknown:
            raise ConfigurationError(f"unexpected M5 parameters: {', '.join(sorted(unknown))}")
        return cls(
            min_leaf=int(data.get("min_leaf", M5_MIN_LEAF)),
            smoothing_k=float(data.get("smoothing_k", M5_SMOOTHING_K)),
            prune=bool(data.get("prune", True)),
        ).validate()


# ============================================
# TREE TYPES
# ============================================


class SplitCandidate(NamedTuple):
    attribute: int
    threshold: float
    sdr: float


@dataclass
class LinearModel:
    intercept: float
    attributes: Tuple[int, ...]
    coefficients: np.ndarray

    @property
    def n_parameters(self) -> int:
        return len(self.attributes) + 1

    def predict(self, Z: np.ndarray) -> np.ndarray:
        Z = np.atleast_2d(Z)
        if not self.attributes:
            return np.full(Z.shape[0], self.intercept)
        return self.intercept + Z[:, list(self.attributes)] @ self.coefficients

    def to_dict(self) -> Dict:
        return {
            "intercept": self.intercept,
            "attributes": list(self.attributes),
            "coefficients": self.coefficients.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "LinearModel":
        return cls(
            intercept=float(data["intercept"]),
            attributes=tuple(int(a) for a in data["attributes"]),
            coefficients=np.array(data["coefficients"], dtype=float),
        )


@dataclass
class M5Node:
    n: int
    model: Optional[LinearModel] = None
    split: Optional[SplitCandidate] = None
    left: Optional["M5Node"] = None
    right: Optional["M5Node"] = None

    @property
    def is_leaf(self) -> bool:
        return self.split is None

    @property
    def sdr(self) -> Optional[float]:
        return None if self.split is None else self.split.sdr

    def route(self, z: np.ndarray) -> "M5Node":
        return self.left if z[self.split.attribute] <= self.split.threshold else self.right

    def split_attributes(self) -> List[int]:
        """Attributes tested anywhere in this subtree."""
        if self.is_leaf:
            return []
        return sorted({self.split.attribute, *self.left.split_attributes(), *self.right.split_attributes()})

    def n_leaves(self) -> int:
        return 1 if self.is_leaf else self.left.n_leaves() + self.right.n_leaves()

    def to_dict(self) -> Dict:
        data = {"n": self.n, "model": self.model.to_dict(), "split": None}
        if not self.is_leaf:
            data["split"] = self.split._asdict()
            data["left"] = self.left.to_dict()
            data["right"] = self.right.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "M5Node":
        node = cls(n=int(data["n"]), model=LinearModel.from_dict(data["model"]))
        if data.get("split") is not None:
            s = data["split"]
            node.split = SplitCandidate(int(s["attribute"]), float(s["threshold"]), float(s["sdr"]))
            node.left = cls.from_dict(data["left"])
            node.right = cls.from_dict(data["right"])
        return node


# ============================================
# SPLITTING
# ============================================


def _population_sd(total: float, total_sq: float, n: int) -> float:
    mean = total / n
    return float(np.sqrt(max(total_sq / n - mean * mean, 0.0)))


def candidate_splits(Z: np.ndarray, y: np.ndarray, min_leaf: int) -> List[SplitCandidate]:
    """
    Every admissible binary split of a node's examples with its SDR.

    A split sits halfway between two consecutive distinct values of an
    attribute and leaves at least ``min_leaf`` examples on each side.
    Candidates are listed by attribute, then by threshold.
    """
    n = len(y)
    sd_all = float(np.std(y))
    candidates = []
    for attribute in range(Z.shape[1]):
        order = np.argsort(Z[:, attribute], kind="stable")
        xs, ys = Z[order, attribute], y[order]
        csum, csq = np.cumsum(ys), np.cumsum(ys * ys)
        for k in range(min_leaf, n - min_leaf + 1):
            if xs[k - 1] == xs[k]:
                continue
            left_sd = _population_sd(csum[k - 1], csq[k - 1], k)
            right_sd = _population_sd(csum[-1] - csum[k - 1], csq[-1] - csq[k - 1], n - k)
            sdr = sd_all - (k / n) * left_sd - ((n - k) / n) * right_sd
            candidates.append(SplitCandidate(attribute, float((xs[k - 1] + xs[k]) / 2), float(sdr)))
    return candidates


# ============================================
# NODE MODELS
# ============================================


def fit_linear_model(Z: np.ndarray, y: np.ndarray, attributes: Sequence[int]) -> LinearModel:
    """Least squares (minimum norm when underdetermined) on the given attributes."""
    attributes = tuple(attributes)
    if not attributes:
        return LinearModel(float(np.mean(y)), (), np.zeros(0))
    design = np.column_stack([np.ones(len(y)), Z[:, list(attributes)]])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    return LinearModel(float(coef[0]), attributes, np.asarray(coef[1:], dtype=float))


def estimated_error(model: LinearModel, Z: np.ndarray, y: np.ndarray) -> float:
    n, v = len(y), model.n_parameters
    mean_abs = float(np.mean(np.abs(model.predict(Z) - y)))
    factor = (n + v) / (n - v) if n > v else M5_SMALL_NODE_FACTOR
    return mean_abs * factor


def eliminate_attributes(model: LinearModel, Z: np.ndarray, y: np.ndarray) -> LinearModel:
    """Drop attributes one at a time while the estimated error does not increase."""
    best, best_error = model, estimated_error(model, Z, y)
    while best.attributes:
        trials = [
            fit_linear_model(Z, y, [a for a in best.attributes if a != drop])
            for drop in best.attributes
        ]
        errors = [estimated_error(t, Z, y) for t in trials]
        i = int(np.argmin(errors))
        if errors[i] > best_error:
            break
        best, best_error = trials[i], errors[i]
    return best


# ============================================
# REGRESSOR
# ============================================


class ModelTreeRegressor(MetaRegressor):
    family = "m5"
    params_type = M5Params

    def _grow(self, Z: np.ndarray, y: np.ndarray, rows: np.ndarray, sd_root: float) -> M5Node:
        node = M5Node(n=len(rows))
        ys = y[rows]
        if len(rows) < 2 * self.params.min_leaf or float(np.std(ys)) <= M5_SD_FRACTION * sd_root:
            return node
        candidates = candidate_splits(Z[rows], ys, self.params.min_leaf)
        if not candidates:
            return node
        best = max(candidates, key=lambda c: c.sdr)
        if best.sdr <= 0:
            return node
        goes_left = Z[rows, best.attribute] <= best.threshold
        node.split = best
        node.left = self._grow(Z, y, rows[goes_left], sd_root)
        node.right = self._grow(Z, y, rows[~goes_left], sd_root)
        return node

    def _attach_models(self, node: M5Node, Z: np.ndarray, y: np.ndarray, rows: np.ndarray) -> float:
        """Fit node models bottom-up, pruning as configured; returns the subtree's estimated error."""
        Zn, yn = Z[rows], y[rows]
        if node.is_leaf:
            attributes = range(Z.shape[1])
        else:
            goes_left = Zn[:, node.split.attribute] <= node.split.threshold
            left_error = self._attach_models(node.left, Z, y, rows[goes_left])
            right_error = self._attach_models(node.right, Z, y, rows[~goes_left])
            attributes = node.split_attributes()

        node.model = fit_linear_model(Zn, yn, attributes)
        if self.params.prune:
            node.model = eliminate_attributes(node.model, Zn, yn)
        model_error = estimated_error(node.model, Zn, yn)
        if node.is_leaf:
            return model_error

        subtree_error = (node.left.n * left_error + node.right.n * right_error) / node.n
        if self.params.prune and model_error <= subtree_error:
            node.split, node.left, node.right = None, None, None
            return model_error
        return subtree_error

    def _fit(self, Z: np.ndarray, y: np.ndarray) -> list:
        rows = np.arange(len(y))
        root = self._grow(Z, y, rows, float(np.std(y)))
        self._attach_models(root, Z, y, rows)
        self.root = root
        logger.debug(f"[LEARNER] {self.name}: tree with {root.n_leaves()} leaf model(s)")
        return []

    def _predict_row(self, z: np.ndarray) -> float:
        path = []
        node = self.root
        while not node.is_leaf:
            path.append(node)
            node = node.route(z)
        value = float(node.model.predict(z)[0])
        k = self.params.smoothing_k
        child = node
        for parent in reversed(path):
            value = (child.n * value + k * float(parent.model.predict(z)[0])) / (child.n + k)
            child = parent
        return value

    def _predict(self, Z: np.ndarray) -> np.ndarray:
        return np.array([self._predict_row(z) for z in Z], dtype=float)

    def _state_dict(self) -> Dict:
        return {"tree": self.root.to_dict()}

    def _load_state(self, state: Dict) -> None:
        self.root = M5Node.from_dict(state["tree"])
