"""
Meta-Learner Handlers - train-meta, evaluate and predict
"""

import argparse
import json
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from loguru import logger

from config import MESSAGES
from exceptions import ConfigHashMismatchError, ConfigurationError
from evaluation.loo import ComparisonRow, LooReport, compare_report, loo_evaluate, save_report, write_comparison
from features.meta_features import FeatureConfig, extract_meta_features
from handlers.common import (
    add_feature_flags,
    announce,
    feature_config_from_args,
    load_learner_file,
    parse_learners,
    require_path,
    resolve_workers,
)
from learners import LearnerSpec, MetaRegressor, fit, load_model, predict_raw, round_and_clamp, save_model
from metabase.store import MetaBase, load_metabase
from tools.dataset_tools import check_admission, load_dataset
from utils.files import PathLike, ensure_dir, write_json

COMPARISON_NAME = "evaluation.csv"

FAMILY_FLAGS = ("kernel", "degree", "coef0", "gamma", "C", "epsilon", "tolerance", "min_leaf", "smoothing_k", "prune")


def verify_metabase_hash(metabase: MetaBase, expected: Optional[str] = None) -> Optional[str]:
    """
    The recorded feature-config hash must match the recorded config and, when
    given, the hash the caller expects.
    """
    recorded = metabase.feature_config_hash
    stored_config = metabase.provenance.get("feature_config")
    if recorded and stored_config is not None:
        computed = FeatureConfig.from_dict(stored_config).hash()
        if computed != recorded:
            raise ConfigHashMismatchError(recorded, computed)
    if expected and recorded != expected:
        raise ConfigHashMismatchError(expected, str(recorded))
    return recorded


# ============================================
# TRAIN
# ============================================


def family_params(args: argparse.Namespace) -> Dict:
    params = json.loads(args.params) if getattr(args, "params", None) else {}
    if not isinstance(params, dict):
        raise ConfigurationError("--params must be a JSON object")
    for flag in FAMILY_FLAGS:
        value = getattr(args, flag, None)
        if value is not None:
            params[flag] = value
    return params


def train_meta(learner, metabase: MetaBase, out: PathLike, params: Optional[Dict] = None) -> MetaRegressor:
    verify_metabase_hash(metabase)
    model = fit(learner, params, metabase)
    save_model(model, out)
    return model


def cmd_train_meta(args: argparse.Namespace) -> int:
    metabase = load_metabase(require_path(args.metabase, "meta-base"))
    model = train_meta(args.learner, metabase, args.out, family_params(args))
    announce("train_done", learner=model.name, count=len(metabase), path=args.out)
    return 0


# ============================================
# EVALUATE
# ============================================


def evaluate_learners(
    specs: Sequence[LearnerSpec],
    metabase: MetaBase,
    out_dir: PathLike,
    workers: int = 1,
    expected_hash: Optional[str] = None,
) -> List[ComparisonRow]:
    """LOO-evaluate each learner; writes <name>.json per learner and the comparison CSV."""
    verify_metabase_hash(metabase, expected_hash)
    out_dir = ensure_dir(out_dir)
    reports: List[LooReport] = []
    for spec in specs:
        report = loo_evaluate(spec, metabase, workers)
        save_report(report, Path(out_dir) / f"{spec.name}.json")
        reports.append(report)
    write_comparison(reports, Path(out_dir) / COMPARISON_NAME)
    rows = compare_report(reports)
    for row in rows:
        logger.info(f"[LOO] {row.method:<14} RAE {row.rae_percent:7.2f}%  r {row.correlation:+.3f}")
    return rows


def cmd_evaluate(args: argparse.Namespace) -> int:
    metabase = load_metabase(require_path(args.metabase, "meta-base"))
    if args.learners_file:
        specs = load_learner_file(args.learners_file)
    else:
        specs = parse_learners(args.learner)
    evaluate_learners(specs, metabase, args.out, resolve_workers(args.workers), args.expect_hash)
    announce("evaluate_done", count=len(specs), path=Path(args.out) / COMPARISON_NAME)
    return 0


# ============================================
# PREDICT
# ============================================


def predict_dataset(
    model: MetaRegressor,
    dataset_path: PathLike,
    feature_config: Optional[FeatureConfig] = None,
    target: Optional[str] = None,
) -> Dict:
    """Recommendation record {dataset, predicted_raw, recommended_count, family, learner}."""
    dataset = load_dataset(dataset_path, target=target)
    admission = check_admission(dataset)
    if not admission.admitted:
        logger.warning(MESSAGES["inadmissible"].format(name=dataset.name, reasons="; ".join(admission.reasons)))
    vector = extract_meta_features(dataset, feature_config or FeatureConfig())
    raw = predict_raw(model, vector)
    return {
        "dataset": dataset.name,
        "predicted_raw": raw,
        "recommended_count": round_and_clamp(raw, model.label_range),
        "family": model.family,
        "learner": model.name,
    }


def cmd_predict(args: argparse.Namespace) -> int:
    model = load_model(require_path(args.model, "model file"))
    record = predict_dataset(model, require_path(args.dataset, "dataset"), feature_config_from_args(args), args.target)
    if args.out:
        write_json(args.out, record)
    print(json.dumps(record, sort_keys=True))
    return 0


# ============================================
# REGISTRATION
# ============================================


def register(subparsers) -> None:
    train = subparsers.add_parser("train-meta", help="Fit a meta-learner on a meta-base")
    train.add_argument("metabase", help="metabase.csv")
    train.add_argument("--learner", "--family", dest="learner", required=True, help="Preset or family name")
    train.add_argument("--out", required=True, help="Model JSON to write")
    train.add_argument("--params", help="Family parameters as a JSON object")
    train.add_argument("--kernel", choices=["poly", "rbf"])
    train.add_argument("--degree", type=int)
    train.add_argument("--coef0", type=float)
    train.add_argument("--gamma", type=float)
    train.add_argument("--C", type=float)
    train.add_argument("--epsilon", type=float)
    train.add_argument("--tolerance", type=float)
    train.add_argument("--min-leaf", type=int)
    train.add_argument("--smoothing-k", type=float)
    train.add_argument("--no-prune", dest="prune", action="store_false", default=None)
    train.set_defaults(handler=cmd_train_meta)

    evaluate = subparsers.add_parser("evaluate", help="Leave-one-out comparison of meta-learners")
    evaluate.add_argument("metabase", help="metabase.csv")
    evaluate.add_argument("--out", required=True, help="Directory for reports and evaluation.csv")
    evaluate.add_argument("--learners-file", help='JSON file with {"learners": [...]}')
    evaluate.add_argument("--learner", action="append", help="Preset name (repeatable)")
    evaluate.add_argument("--expect-hash", help="Required feature-config hash of the meta-base")
    evaluate.add_argument("--workers", type=int, help="Worker processes (env ELM_ADVISOR_WORKERS)")
    evaluate.set_defaults(handler=cmd_evaluate)

    predict = subparsers.add_parser("predict", help="Recommend a hidden-neuron count for a dataset")
    predict.add_argument("model", help="Model JSON from train-meta")
    predict.add_argument("dataset", help="CSV or ARFF dataset")
    predict.add_argument("--target", help="Target column (default: last column)")
    predict.add_argument("--out", help="Also write the record to this JSON file")
    add_feature_flags(predict)
    predict.set_defaults(handler=cmd_predict)
