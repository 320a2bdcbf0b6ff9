"""
Extreme Learning Machine engine.

Single hidden layer, sigmoid activation. Hidden weights and biases are
drawn once from a seeded generator; output weights are the minimum-norm
least-squares solution of H beta = t.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from loguru import logger
from scipy.special import expit

from config import BIAS_RANGE, ELM_RCOND, WEIGHT_RANGE
from exceptions import ElmTrainingError, ShapeMismatchError
from tools.dataset_tools import Dataset
from utils.files import PathLike, read_json, write_json


@dataclass(frozen=True, eq=False)
class ElmModel:
    input_weights: np.ndarray  # (L, d)
    biases: np.ndarray  # (L,)
    output_weights: np.ndarray  # (L,)
    seed: Optional[int] = None

    @property
    def n_hidden(self) -> int:
        return int(self.input_weights.shape[0])

    @property
    def n_inputs(self) -> int:
        return int(self.input_weights.shape[1])

    def to_dict(self) -> dict:
        return {
            "d": self.n_inputs,
            "L": self.n_hidden,
            "seed": self.seed,
            "input_weights": self.input_weights.ravel().tolist(),
            "biases": self.biases.tolist(),
            "output_weights": self.output_weights.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ElmModel":
        d, n_hidden = int(data["d"]), int(data["L"])
        return cls(
            input_weights=np.array(data["input_weights"], dtype=float).reshape(n_hidden, d),
            biases=np.array(data["biases"], dtype=float),
            output_weights=np.array(data["output_weights"], dtype=float),
            seed=data.get("seed"),
        )


@dataclass(frozen=True)
class RmseScore:
    value: float
    n: int


def sigmoid(x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Logistic function 1 / (1 + exp(-x)), overflow-safe."""
    return expit(x)


def draw_hidden_layer(n_hidden: int, n_inputs: int, seed: int):
    """
    Random hidden parameters: weights in WEIGHT_RANGE, biases in BIAS_RANGE.

    Each neuron draws its (d weights, 1 bias) as one row, so for a fixed seed
    the first k neurons of a larger layer equal the neurons of a layer of size k.
    """
    rng = np.random.default_rng(seed)
    unit = rng.random((n_hidden, n_inputs + 1))
    w_lo, w_hi = WEIGHT_RANGE
    b_lo, b_hi = BIAS_RANGE
    weights = w_lo + (w_hi - w_lo) * unit[:, :n_inputs]
    biases = b_lo + (b_hi - b_lo) * unit[:, n_inputs]
    return weights, biases


def hidden_activations(X: np.ndarray, weights: np.ndarray, biases: np.ndarray) -> np.ndarray:
    """H[i, j] = g(w_j . x_i + b_j)."""
    return sigmoid(X @ weights.T + biases)


def solve_output_weights(H: np.ndarray, t: np.ndarray, rcond: float = ELM_RCOND) -> np.ndarray:
    """Minimum-norm least squares via SVD; singular values below rcond * sigma_max count as zero."""
    beta, *_ = np.linalg.lstsq(H, t, rcond=rcond)
    return beta


def fit_elm(X: np.ndarray, t: np.ndarray, n_hidden: int, seed: int) -> ElmModel:
    """
    Train an ELM on a feature matrix.

    Args:
        X: (N, d) inputs
        t: (N,) targets
        n_hidden: Hidden-neuron count L >= 1
        seed: Seed for the hidden layer

    Returns:
        Trained ElmModel
    """
    if n_hidden < 1:
        raise ElmTrainingError(f"hidden-neuron count must be >= 1, got {n_hidden}")
    X = np.asarray(X, dtype=float)
    t = np.asarray(t, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1:
        raise ElmTrainingError(f"expected a non-empty 2-D input matrix, got shape {X.shape}")
    if t.shape != (X.shape[0],):
        raise ShapeMismatchError(X.shape[0], t.size, "target length")

    weights, biases = draw_hidden_layer(n_hidden, X.shape[1], seed)
    H = hidden_activations(X, weights, biases)
    if not np.all(np.isfinite(H)):
        raise ElmTrainingError("non-finite hidden activation")

    beta = solve_output_weights(H, t)
    if not np.all(np.isfinite(beta)):
        raise ElmTrainingError("non-finite output weights")
    return ElmModel(input_weights=weights, biases=biases, output_weights=beta, seed=seed)


def train_elm(train: Dataset, n_hidden: int, seed: int) -> ElmModel:
    """Train an ELM on a normalized dataset."""
    if not train.normalized:
        logger.warning(f"[ELM] training on un-normalized dataset '{train.name}'")
    return fit_elm(train.feature_matrix(), train.target.values, n_hidden, seed)


def predict(model: ElmModel, rows: np.ndarray) -> np.ndarray:
    """Network output sum_i beta_i g(w_i . x + b_i) for every row."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if rows.shape[1] != model.n_inputs:
        raise ShapeMismatchError(model.n_inputs, rows.shape[1])
    return hidden_activations(rows, model.input_weights, model.biases) @ model.output_weights


def rmse(predictions: Sequence[float], targets: Sequence[float]) -> RmseScore:
    """Root mean square error sqrt(mean((P - T)^2))."""
    p = np.asarray(predictions, dtype=float)
    t = np.asarray(targets, dtype=float)
    if p.shape != t.shape:
        raise ShapeMismatchError(t.shape, p.shape, "prediction length")
    if p.size == 0:
        raise ShapeMismatchError("at least 1", 0, "prediction length")
    return RmseScore(value=float(np.sqrt(np.mean((p - t) ** 2))), n=int(p.size))


def dump_model(model: ElmModel, path: PathLike) -> Path:
    """Debug dump of a trained model."""
    return write_json(path, model.to_dict())


def load_model(path: PathLike) -> ElmModel:
    return ElmModel.from_dict(read_json(path))
