"""
Label Search - exhaustive hidden-neuron sweep with repeated ELM trainings.

For each L in [n_min, n_max] and each repetition, an ELM is trained with a
seed derived from (base_seed, dataset, L, repetition) and scored by test
RMSE. The meta-label is the L with the lowest mean test RMSE (ties go to
the smaller L). Every task is pure, so any worker count gives the same result.
"""

import hashlib
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed
from loguru import logger

from config import (
    DEFAULT_SEED,
    HISTOGRAM_BIN_WIDTH,
    METABASE_META_SUFFIX,
    SWEEP_N_MAX,
    SWEEP_N_MIN,
    SWEEP_REPETITIONS,
    TRAIN_FRACTION,
)
from elm.engine import fit_elm, predict, rmse
from exceptions import AdvisorError, ConfigurationError, DatasetValidationError, SweepError, TableLayoutError
from tools.dataset_tools import Dataset, check_admission
from tools.preprocessing import split_train_test
from utils.files import (
    PathLike,
    config_hash,
    read_csv_table,
    read_json,
    sidecar_path,
    table_rows,
    write_csv,
    write_json,
)
from utils.progress import SweepTracker

SUMMARY_HEADER = ["dataset", "best_count", "min_mean_rmse", "n_min", "n_max"]
HISTOGRAM_HEADER = ["bin_start", "bin_end", "count"]


# ============================================
# TYPES
# ============================================


@dataclass(frozen=True)
class SweepConfig:
    n_min: int = SWEEP_N_MIN
    n_max: int = SWEEP_N_MAX
    repetitions: int = SWEEP_REPETITIONS
    train_fraction: float = TRAIN_FRACTION
    base_seed: int = DEFAULT_SEED
    resplit_per_repetition: bool = False

    def validate(self) -> "SweepConfig":
        if not 1 <= self.n_min <= self.n_max:
            raise ConfigurationError(f"need 1 <= n_min <= n_max, got n_min={self.n_min}, n_max={self.n_max}")
        if self.repetitions < 1:
            raise ConfigurationError(f"repetitions must be >= 1, got {self.repetitions}")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigurationError(f"train_fraction must be in (0, 1), got {self.train_fraction}")
        return self

    @property
    def counts(self) -> range:
        return range(self.n_min, self.n_max + 1)

    def to_dict(self) -> Dict:
        return {
            "n_min": self.n_min,
            "n_max": self.n_max,
            "repetitions": self.repetitions,
            "train_fraction": self.train_fraction,
            "base_seed": self.base_seed,
            "resplit_per_repetition": self.resplit_per_repetition,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "SweepConfig":
        return cls(
            n_min=int(data.get("n_min", SWEEP_N_MIN)),
            n_max=int(data.get("n_max", SWEEP_N_MAX)),
            repetitions=int(data.get("repetitions", SWEEP_REPETITIONS)),
            train_fraction=float(data.get("train_fraction", TRAIN_FRACTION)),
            base_seed=int(data.get("base_seed", DEFAULT_SEED)),
            resplit_per_repetition=bool(data.get("resplit_per_repetition", False)),
        ).validate()


@dataclass(frozen=True)
class CountStats:
    """Test RMSE statistics for one hidden-neuron count."""

    n_hidden: int
    mean_rmse: Optional[float]
    std_rmse: Optional[float]
    n_ok: int
    n_failed: int = 0

    @property
    def excluded(self) -> bool:
        return self.n_ok == 0

    def to_dict(self) -> Dict:
        return {
            "n_hidden": self.n_hidden,
            "mean_rmse": self.mean_rmse,
            "std_rmse": self.std_rmse,
            "n_ok": self.n_ok,
            "n_failed": self.n_failed,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "CountStats":
        return cls(
            n_hidden=int(data["n_hidden"]),
            mean_rmse=data["mean_rmse"],
            std_rmse=data["std_rmse"],
            n_ok=int(data["n_ok"]),
            n_failed=int(data.get("n_failed", 0)),
        )


class SweepLabel(NamedTuple):
    """One row of the sweep summary CSV."""

    dataset_name: str
    best_count: int
    min_mean_rmse: float
    n_min: int
    n_max: int


@dataclass(frozen=True)
class SweepResult:
    dataset_name: str
    per_count: Tuple[CountStats, ...]
    best_count: int
    config: SweepConfig
    warnings: Tuple[str, ...] = ()

    @property
    def min_mean_rmse(self) -> float:
        return next(c.mean_rmse for c in self.per_count if c.n_hidden == self.best_count)

    def label(self) -> SweepLabel:
        return SweepLabel(self.dataset_name, self.best_count, self.min_mean_rmse, self.config.n_min, self.config.n_max)

    def to_dict(self) -> Dict:
        return {
            "dataset": self.dataset_name,
            "best_count": self.best_count,
            "min_mean_rmse": self.min_mean_rmse,
            "config": self.config.to_dict(),
            "warnings": list(self.warnings),
            "per_count": [c.to_dict() for c in self.per_count],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "SweepResult":
        return cls(
            dataset_name=data["dataset"],
            per_count=tuple(CountStats.from_dict(c) for c in data["per_count"]),
            best_count=int(data["best_count"]),
            config=SweepConfig.from_dict(data["config"]),
            warnings=tuple(data.get("warnings", ())),
        )


@dataclass(frozen=True)
class SweepFailure:
    dataset_name: str
    reason: str


@dataclass
class CorpusSweep:
    results: List[SweepResult] = field(default_factory=list)
    failures: List[SweepFailure] = field(default_factory=list)


@dataclass(frozen=True)
class HistogramBin:
    start: int
    end: int
    count: int


# ============================================
# SEEDS AND SPLITS
# ============================================


def derive_seed(base_seed: int, dataset_name: str, n_hidden: int, repetition: int) -> int:
    """Stable 64-bit seed for one (dataset, L, repetition) training."""
    key = f"{base_seed}|{dataset_name}|{n_hidden}|{repetition}".encode("utf-8")
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")


def _splits(dataset: Dataset, config: SweepConfig):
    """(X_train, t_train, X_test, t_test) per repetition."""
    if config.resplit_per_repetition:
        seeds = [derive_seed(config.base_seed, dataset.name, 0, r) for r in range(config.repetitions)]
    else:
        seeds = [config.base_seed]

    splits = []
    for seed in seeds:
        train, test = split_train_test(dataset, config.train_fraction, seed)
        splits.append((train.feature_matrix(), train.target.values, test.feature_matrix(), test.target.values))
    if len(splits) == 1:
        splits = splits * config.repetitions
    return splits


# ============================================
# SWEEP
# ============================================


def _evaluate_count(splits, n_hidden: int, seeds: Sequence[int]) -> List[Optional[float]]:
    """Test RMSE of each repetition for one L; None where training failed."""
    scores: List[Optional[float]] = []
    for (X_train, t_train, X_test, t_test), seed in zip(splits, seeds):
        try:
            model = fit_elm(X_train, t_train, n_hidden, seed)
            scores.append(rmse(predict(model, X_test), t_test).value)
        except (AdvisorError, np.linalg.LinAlgError, FloatingPointError, ValueError):
            scores.append(None)
    return scores


def _count_stats(n_hidden: int, scores: Sequence[Optional[float]]) -> CountStats:
    ok = np.array([s for s in scores if s is not None], dtype=float)
    n_failed = len(scores) - ok.size
    if ok.size == 0:
        return CountStats(n_hidden, None, None, 0, n_failed)
    return CountStats(n_hidden, float(ok.mean()), float(ok.std()), int(ok.size), n_failed)


def select_best_count(per_count: Sequence[CountStats]) -> int:
    """L with the lowest mean test RMSE among non-excluded counts; ties go to the smaller L."""
    best: Optional[CountStats] = None
    for stats in sorted(per_count, key=lambda c: c.n_hidden):
        if stats.excluded:
            continue
        if best is None or stats.mean_rmse < best.mean_rmse:
            best = stats
    if best is None:
        raise SweepError("every hidden-neuron count failed in all repetitions")
    return best.n_hidden


def run_sweep(dataset: Dataset, config: SweepConfig, workers: int = 1) -> SweepResult:
    """
    Sweep L over [n_min, n_max] on one normalized dataset.

    Args:
        dataset: Normalized dataset
        config: Sweep configuration
        workers: Number of joblib workers; the result does not depend on it

    Returns:
        SweepResult with the full per-count curve
    """
    config.validate()
    if not dataset.normalized:
        raise DatasetValidationError(f"dataset '{dataset.name}' must be normalized before the sweep")
    admission = check_admission(dataset)
    if not admission.admitted:
        logger.warning(f"[SWEEP] {dataset.name} is not admitted: {'; '.join(admission.reasons)}")

    splits = _splits(dataset, config)
    counts = list(config.counts)
    seeds = {
        n: [derive_seed(config.base_seed, dataset.name, n, r) for r in range(config.repetitions)] for n in counts
    }
    scores = Parallel(n_jobs=workers)(delayed(_evaluate_count)(splits, n, seeds[n]) for n in counts)

    per_count = tuple(_count_stats(n, s) for n, s in zip(counts, scores))
    warnings = []
    for stats in per_count:
        if stats.excluded:
            warnings.append(f"excluded_count:{stats.n_hidden}")
        elif stats.n_failed:
            warnings.append(f"failed_repetitions:{stats.n_hidden}:{stats.n_failed}")
    if warnings:
        logger.warning(f"[SWEEP] {dataset.name}: {len(warnings)} count(s) with failed trainings")

    return SweepResult(
        dataset_name=dataset.name,
        per_count=per_count,
        best_count=select_best_count(per_count),
        config=config,
        warnings=tuple(warnings),
    )


def sweep_corpus(corpus: Sequence[Dataset], config: SweepConfig, workers: int = 1) -> CorpusSweep:
    """
    Sweep every dataset; one failing dataset does not stop the others.

    Returns:
        CorpusSweep with results in input order and the recorded failures
    """
    if not corpus:
        raise SweepError("empty corpus")
    config.validate()

    tracker = SweepTracker()
    outcome = CorpusSweep()
    for dataset in corpus:
        started = time.monotonic()
        try:
            result = run_sweep(dataset, config, workers)
        except AdvisorError as e:
            tracker.add_failure(dataset.name, e.message)
            outcome.failures.append(SweepFailure(dataset.name, e.message))
            continue
        failed = sum(c.n_failed for c in result.per_count)
        trainings = len(result.per_count) * config.repetitions
        tracker.add_dataset(dataset.name, trainings, failed, result.best_count, time.monotonic() - started)
        outcome.results.append(result)
    return outcome


def label_histogram(
    results: Sequence[Union[SweepResult, SweepLabel]],
    bin_width: int = HISTOGRAM_BIN_WIDTH,
    n_min: Optional[int] = None,
    n_max: Optional[int] = None,
) -> List[HistogramBin]:
    """
    Count best_count values per bin of width ``bin_width`` over [n_min, n_max].

    Accepts full sweep results or summary rows. The range defaults to the
    first entry's sweep range (or the global defaults for an empty list).
    The last bin may be narrower.
    """
    if bin_width < 1:
        raise ConfigurationError(f"bin width must be >= 1, got {bin_width}")
    labels = [r.label() if isinstance(r, SweepResult) else r for r in results]
    if labels:
        n_min = labels[0].n_min if n_min is None else n_min
        n_max = labels[0].n_max if n_max is None else n_max
    n_min = SWEEP_N_MIN if n_min is None else n_min
    n_max = SWEEP_N_MAX if n_max is None else n_max

    starts = list(range(n_min, n_max + 1, bin_width))
    counts = [0] * len(starts)
    for label in labels:
        if not n_min <= label.best_count <= n_max:
            raise ConfigurationError(f"best count {label.best_count} outside [{n_min}, {n_max}]")
        counts[(label.best_count - n_min) // bin_width] += 1
    return [HistogramBin(s, min(s + bin_width - 1, n_max), c) for s, c in zip(starts, counts)]


# ============================================
# PERSISTENCE
# ============================================


def save_sweep(result: SweepResult, path: PathLike) -> Path:
    return write_json(path, result.to_dict())


def load_sweep(path: PathLike) -> SweepResult:
    return SweepResult.from_dict(read_json(path))


def write_summary(labels: Sequence[SweepLabel], path: PathLike) -> Path:
    rows = [(lb.dataset_name, lb.best_count, lb.min_mean_rmse, lb.n_min, lb.n_max) for lb in labels]
    return write_csv(path, SUMMARY_HEADER, rows)


def read_summary(path: PathLike) -> List[SweepLabel]:
    try:
        frame = read_csv_table(path, SUMMARY_HEADER)
    except TableLayoutError as e:
        raise ConfigurationError(f"{path} is not a sweep summary (expected header {','.join(SUMMARY_HEADER)}): {e.details}") from e
    labels = []
    for line_no, r in table_rows(frame):
        try:
            labels.append(SweepLabel(r[0], int(r[1]), float(r[2]), int(r[3]), int(r[4])))
        except ValueError as e:
            raise ConfigurationError(f"{path} line {line_no}: {e}") from e
    return labels


def histogram_provenance(
    bins: Sequence[HistogramBin], bin_width: int, sweep_config: Optional[SweepConfig] = None
) -> Dict:
    """Bin layout and, when known, the sweep config behind the labels; hashed together."""
    payload = {
        "bin_width": bin_width,
        "n_min": bins[0].start if bins else None,
        "n_max": bins[-1].end if bins else None,
        "sweep_config": sweep_config.to_dict() if sweep_config else None,
    }
    return {
        **payload,
        "sweep_config_hash": config_hash(sweep_config.to_dict()) if sweep_config else None,
        "config_hash": config_hash(payload),
    }


def write_histogram(
    bins: Sequence[HistogramBin],
    path: PathLike,
    bin_width: int = HISTOGRAM_BIN_WIDTH,
    sweep_config: Optional[SweepConfig] = None,
) -> Path:
    """Histogram CSV plus a sidecar with its provenance hash."""
    path = write_csv(path, HISTOGRAM_HEADER, [(b.start, b.end, b.count) for b in bins])
    write_json(sidecar_path(path, METABASE_META_SUFFIX), histogram_provenance(bins, bin_width, sweep_config))
    return path
