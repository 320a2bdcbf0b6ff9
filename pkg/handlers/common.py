"""
Common Handler helpers - pipeline config, flag/env precedence, completion messages
"""

import argparse
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from loguru import logger

from config import DEFAULT_LEARNERS, DEFAULT_SEED, DEFAULT_WORKERS, HISTOGRAM_BIN_WIDTH, MESSAGES
from exceptions import ConfigurationError
from features.meta_features import FeatureConfig
from learners import LearnerSpec, resolve_learner
from search.label_search import SweepConfig
from utils.files import PathLike, config_hash, read_json

PIPELINE_KEYS = {
    "corpus",
    "output",
    "target",
    "sweep",
    "features",
    "learners",
    "final_learner",
    "workers",
    "seed",
    "bin_width",
}


def announce(key: str, **kwargs) -> str:
    """Log a completion message from MESSAGES (stderr; stdout stays for data)."""
    text = MESSAGES[key].format(**kwargs)
    logger.info(text)
    return text


def resolve_workers(flag: Optional[int] = None, configured: Optional[int] = None) -> int:
    """Flag, then config file, then ELM_ADVISOR_WORKERS / default."""
    workers = next(v for v in (flag, configured, DEFAULT_WORKERS) if v is not None)
    if int(workers) < 1:
        raise ConfigurationError(f"worker count must be >= 1, got {workers}")
    return int(workers)


def resolve_seed(flag: Optional[int] = None, configured: Optional[int] = None) -> int:
    return int(next(v for v in (flag, configured, DEFAULT_SEED) if v is not None))


def require_path(path: PathLike, what: str, directory: bool = False) -> Path:
    path = Path(path)
    if not (path.is_dir() if directory else path.is_file()):
        raise ConfigurationError(f"{what} not found: {path}")
    return path


def parse_learners(items: Optional[Sequence]) -> List[LearnerSpec]:
    """Preset names, family names or {name, family, params} dicts; defaults to DEFAULT_LEARNERS."""
    specs = [resolve_learner(item) for item in (items or DEFAULT_LEARNERS)]
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise ConfigurationError(f"learner names must be unique: {', '.join(names)}")
    return specs


def load_learner_file(path: PathLike) -> List[LearnerSpec]:
    """Learner list from a JSON file: {"learners": [...]} or a pipeline config."""
    data = read_json(require_path(path, "learner config"))
    return parse_learners(data.get("learners"))


# ============================================
# SWEEP / FEATURE FLAGS
# ============================================


def add_sweep_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n-min", type=int, help="Smallest hidden-neuron count")
    parser.add_argument("--n-max", type=int, help="Largest hidden-neuron count")
    parser.add_argument("--repetitions", type=int, help="ELM trainings per count")
    parser.add_argument("--train-fraction", type=float, help="Share of rows used for training")
    parser.add_argument("--resplit", action="store_true", default=None, help="Draw a new split per repetition")


def add_feature_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--cv-low", type=float, help="CV threshold between levels 0 and 1")
    parser.add_argument("--cv-high", type=float, help="CV threshold between levels 1 and 2")
    parser.add_argument("--outlier-factor", type=float, help="Tukey fence multiplier")


def add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--workers", type=int, help="Worker processes (env ELM_ADVISOR_WORKERS)")
    parser.add_argument("--seed", type=int, help="Global seed (env ELM_ADVISOR_SEED)")


def sweep_config_from_args(args: argparse.Namespace, base: Optional[SweepConfig] = None) -> SweepConfig:
    base = base or SweepConfig(base_seed=resolve_seed(getattr(args, "seed", None)))
    overrides = {
        "n_min": getattr(args, "n_min", None),
        "n_max": getattr(args, "n_max", None),
        "repetitions": getattr(args, "repetitions", None),
        "train_fraction": getattr(args, "train_fraction", None),
        "base_seed": getattr(args, "seed", None),
        "resplit_per_repetition": getattr(args, "resplit", None),
    }
    return replace(base, **{k: v for k, v in overrides.items() if v is not None}).validate()


def feature_config_from_args(args: argparse.Namespace, base: Optional[FeatureConfig] = None) -> FeatureConfig:
    overrides = {
        "cv_low": getattr(args, "cv_low", None),
        "cv_high": getattr(args, "cv_high", None),
        "outlier_factor": getattr(args, "outlier_factor", None),
    }
    return replace(base or FeatureConfig(), **{k: v for k, v in overrides.items() if v is not None}).validate()


# ============================================
# PIPELINE CONFIG
# ============================================


@dataclass(frozen=True)
class PipelineConfig:
    """
    Everything one pipeline run depends on.

    Precedence when loading: command-line flag > JSON file > environment > config.py constant.
    """

    corpus_dir: Path
    output_dir: Path
    sweep: SweepConfig = field(default_factory=SweepConfig)
    features: FeatureConfig = field(default_factory=FeatureConfig)
    learners: List[LearnerSpec] = field(default_factory=lambda: parse_learners(None))
    final_learner: Optional[str] = None
    target: Optional[str] = None
    workers: int = 1
    seed: int = DEFAULT_SEED
    bin_width: int = HISTOGRAM_BIN_WIDTH

    def validate(self) -> "PipelineConfig":
        self.sweep.validate()
        self.features.validate()
        if self.workers < 1:
            raise ConfigurationError(f"worker count must be >= 1, got {self.workers}")
        if self.bin_width < 1:
            raise ConfigurationError(f"bin width must be >= 1, got {self.bin_width}")
        if not self.learners:
            raise ConfigurationError("at least one learner is required")
        if self.final_learner and self.final_learner not in [s.name for s in self.learners]:
            raise ConfigurationError(f"final learner '{self.final_learner}' is not in the learner list")
        require_path(self.corpus_dir, "corpus directory", directory=True)
        return self

    def to_dict(self) -> Dict:
        """Serialized form; worker count and paths are left out so the hash only tracks results."""
        return {
            "target": self.target,
            "sweep": self.sweep.to_dict(),
            "features": self.features.to_dict(),
            "learners": [s.to_dict() for s in self.learners],
            "final_learner": self.final_learner,
            "seed": self.seed,
            "bin_width": self.bin_width,
        }

    def hash(self) -> str:
        return config_hash(self.to_dict())


def load_pipeline_config(path: PathLike, args: Optional[argparse.Namespace] = None) -> PipelineConfig:
    """
    Read a pipeline JSON file and apply command-line overrides.

    Validation (n_min <= n_max, paths, learner names) happens here, before
    any work is done.
    """
    path = require_path(path, "pipeline config")
    data = read_json(path)
    unknown = set(data) - PIPELINE_KEYS
    if unknown:
        raise ConfigurationError(f"unknown pipeline keys: {', '.join(sorted(unknown))}")
    for key in ("corpus", "output"):
        if key not in data and getattr(args, key, None) is None:
            raise ConfigurationError(f"pipeline config needs '{key}'")

    args = args or argparse.Namespace()
    seed = resolve_seed(getattr(args, "seed", None), data.get("seed"))
    sweep = sweep_config_from_args(args, SweepConfig.from_dict({"base_seed": seed, **data.get("sweep", {})}))
    features = feature_config_from_args(args, FeatureConfig.from_dict(data.get("features", {})))

    # flags resolve against the working directory, file entries against the file's directory
    def _path(key: str) -> Path:
        override = getattr(args, key, None)
        if override:
            return Path(override).absolute()
        value = Path(data[key])
        return value if value.is_absolute() else (path.parent / value)

    return PipelineConfig(
        corpus_dir=_path("corpus"),
        output_dir=_path("output"),
        sweep=sweep,
        features=features,
        learners=parse_learners(data.get("learners")),
        final_learner=data.get("final_learner"),
        target=data.get("target"),
        workers=resolve_workers(getattr(args, "workers", None), data.get("workers")),
        seed=seed,
        bin_width=int(data.get("bin_width", HISTOGRAM_BIN_WIDTH)),
    ).validate()
