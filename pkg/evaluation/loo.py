"""
Leave-One-Out Evaluation - relative absolute error and correlation of meta-learners.

Each fold refits the learner from scratch on the other n - 1 meta-examples;
the RAE baseline of a fold is the mean of those n - 1 labels.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed
from loguru import logger
from scipy import stats
from sklearn.model_selection import LeaveOneOut

from config import METABASE_META_SUFFIX
from exceptions import EvaluationError
from learners import LearnerSpec, fit_arrays, resolve_learner
from metabase.store import MetaBase
from utils.files import PathLike, config_hash, read_json, sidecar_path, write_csv, write_json

MIN_EXAMPLES = 3
COMPARISON_HEADER = ["method", "rae_percent", "correlation"]


@dataclass(frozen=True)
class LooReport:
    learner: str
    family: str
    params: Dict
    dataset_names: Tuple[str, ...]
    actuals: Tuple[float, ...]
    predictions: Tuple[float, ...]
    baselines: Tuple[float, ...]
    rae_percent: float
    pearson_correlation: float
    warnings: Tuple[str, ...] = ()
    feature_config_hash: Optional[str] = None

    def __post_init__(self):
        for name in ("dataset_names", "actuals", "predictions", "baselines", "warnings"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not len(self.actuals) == len(self.predictions) == len(self.baselines) == len(self.dataset_names):
            raise EvaluationError("report columns have different lengths")

    def __len__(self) -> int:
        return len(self.actuals)

    def to_dict(self) -> Dict:
        return {
            "learner": self.learner,
            "family": self.family,
            "params": self.params,
            "rae_percent": self.rae_percent,
            "pearson_correlation": self.pearson_correlation,
            "warnings": list(self.warnings),
            "feature_config_hash": self.feature_config_hash,
            "examples": [
                {"dataset": n, "actual": a, "predicted_raw": p, "baseline": b}
                for n, a, p, b in zip(self.dataset_names, self.actuals, self.predictions, self.baselines)
            ],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "LooReport":
        examples = data.get("examples", [])
        return cls(
            learner=data["learner"],
            family=data["family"],
            params=data.get("params", {}),
            dataset_names=[e["dataset"] for e in examples],
            actuals=[float(e["actual"]) for e in examples],
            predictions=[float(e["predicted_raw"]) for e in examples],
            baselines=[float(e["baseline"]) for e in examples],
            rae_percent=float(data["rae_percent"]),
            pearson_correlation=float(data["pearson_correlation"]),
            warnings=data.get("warnings", ()),
            feature_config_hash=data.get("feature_config_hash"),
        )


class ComparisonRow(NamedTuple):
    method: str
    rae_percent: float
    correlation: float


# ============================================
# METRICS
# ============================================


def _paired(a: Sequence[float], b: Sequence[float], what: str) -> Tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise EvaluationError(f"{what}: length mismatch ({a.size} vs {b.size})")
    return a, b


def rae(
    predictions: Sequence[float],
    actuals: Sequence[float],
    baselines: Sequence[float],
    warnings: Optional[List[str]] = None,
) -> float:
    """
    Relative absolute error in percent: 100 * sum|p - a| / sum|baseline - a|.

    A zero denominator yields 0 and appends ``rae_degenerate`` to ``warnings``.
    """
    p, a = _paired(predictions, actuals, "rae")
    b, _ = _paired(baselines, actuals, "rae")
    if a.size == 0:
        raise EvaluationError("rae needs at least one prediction")
    denominator = float(np.sum(np.abs(b - a)))
    if denominator == 0:
        if warnings is not None:
            warnings.append("rae_degenerate")
        return 0.0
    return 100.0 * float(np.sum(np.abs(p - a))) / denominator


def pearson(xs: Sequence[float], ys: Sequence[float], warnings: Optional[List[str]] = None) -> float:
    """Sample Pearson correlation; 0 (flagged ``pearson_degenerate``) below 2 pairs or with zero variance."""
    x, y = _paired(xs, ys, "pearson")
    if x.size < 2 or np.ptp(x) == 0 or np.ptp(y) == 0:
        if warnings is not None:
            warnings.append("pearson_degenerate")
        return 0.0
    return float(np.clip(stats.pearsonr(x, y)[0], -1.0, 1.0))


# ============================================
# LEAVE-ONE-OUT
# ============================================


def _run_fold(spec: LearnerSpec, X, y, train, test, label_range, feature_hash) -> Tuple[float, float]:
    model = fit_arrays(spec, X[train], y[train], label_range, feature_hash)
    return float(model.predict_raw(X[test])[0]), float(np.mean(y[train]))


def loo_evaluate(
    learner: Union[str, LearnerSpec, Dict],
    metabase: MetaBase,
    workers: int = 1,
) -> LooReport:
    """
    Leave-one-out evaluation of one learner on a meta-base.

    Args:
        learner: Preset name, family name or LearnerSpec
        metabase: Meta-examples (at least 3)
        workers: Parallel fold workers; results do not depend on it

    Returns:
        LooReport with raw (unrounded) predictions

    Raises:
        EvaluationError: too few examples, or any fold failed to fit
    """
    spec = resolve_learner(learner)
    n = len(metabase)
    if n < MIN_EXAMPLES:
        raise EvaluationError(f"leave-one-out needs at least {MIN_EXAMPLES} meta-examples, got {n}")

    X, y = metabase.feature_matrix, metabase.labels
    folds = list(LeaveOneOut().split(X))
    try:
        outcomes = Parallel(n_jobs=workers)(
            delayed(_run_fold)(spec, X, y, train, test, metabase.label_range, metabase.feature_config_hash)
            for train, test in folds
        )
    except EvaluationError:
        raise
    except Exception as e:
        raise EvaluationError(f"{spec.name}: a leave-one-out fold failed: {e}") from e

    predictions = [p for p, _ in outcomes]
    baselines = [b for _, b in outcomes]
    warnings: List[str] = []
    score = rae(predictions, y, baselines, warnings)
    correlation = pearson(predictions, y, warnings)
    if warnings:
        logger.warning(f"[LOO] {spec.name}: {';'.join(warnings)}")
    logger.info(f"[LOO] {spec.name} | RAE: {score:.2f}% | r: {correlation:.3f} | folds: {n}")

    return LooReport(
        learner=spec.name,
        family=spec.family,
        params=spec.build_params().to_dict(),
        dataset_names=metabase.names,
        actuals=y.tolist(),
        predictions=predictions,
        baselines=baselines,
        rae_percent=score,
        pearson_correlation=correlation,
        warnings=warnings,
        feature_config_hash=metabase.feature_config_hash,
    )


def compare_report(reports: Sequence[LooReport]) -> List[ComparisonRow]:
    """Rows (method, RAE %, correlation) sorted by RAE; equal RAE keeps input order."""
    if not reports:
        raise EvaluationError("nothing to compare")
    rows = [ComparisonRow(r.learner, r.rae_percent, r.pearson_correlation) for r in reports]
    return sorted(rows, key=lambda row: row.rae_percent)


# ============================================
# PERSISTENCE
# ============================================


def save_report(report: LooReport, path: PathLike) -> Path:
    return write_json(path, report.to_dict())


def load_report(path: PathLike) -> LooReport:
    return LooReport.from_dict(read_json(path))


def comparison_provenance(reports: Sequence[LooReport]) -> Dict:
    """Feature-config hash and learner settings behind a comparison table, with their joint hash."""
    hashes = sorted({r.feature_config_hash for r in reports if r.feature_config_hash})
    if len(hashes) > 1:
        raise EvaluationError(f"reports come from meta-bases with different feature configs: {', '.join(hashes)}")
    payload = {
        "feature_config_hash": hashes[0] if hashes else None,
        "learners": [{"name": r.learner, "family": r.family, "params": r.params} for r in reports],
    }
    return {**payload, "config_hash": config_hash(payload)}


def write_comparison(reports: Sequence[LooReport], path: PathLike) -> Path:
    """evaluation.csv sorted by RAE, plus a sidecar recording what produced it."""
    path = write_csv(path, COMPARISON_HEADER, compare_report(reports))
    write_json(sidecar_path(path, METABASE_META_SUFFIX), comparison_provenance(reports))
    return path
