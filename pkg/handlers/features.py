"""
Features Handler - 16 meta-features per raw dataset
"""

import argparse
from typing import List, Sequence, Tuple

from loguru import logger

from exceptions import DatasetValidationError
from features.meta_features import FeatureConfig, MetaFeatureVector, extract_meta_features, write_features
from handlers.common import add_feature_flags, announce, feature_config_from_args
from tools.dataset_tools import Dataset, check_admission, load_corpus
from utils.files import PathLike


def admitted_datasets(datasets: Sequence[Dataset]) -> List[Dataset]:
    """Datasets that pass corpus admission; the others are logged and dropped."""
    kept = []
    for dataset in datasets:
        report = check_admission(dataset)
        if report.admitted:
            kept.append(dataset)
        else:
            logger.warning(f"[FEATURES] skipped {dataset.name}: {'; '.join(report.reasons)}")
    return kept


def extract_corpus(datasets: Sequence[Dataset], config: FeatureConfig) -> List[Tuple[str, MetaFeatureVector]]:
    rows = []
    for dataset in datasets:
        vector = extract_meta_features(dataset, config)
        rows.append((dataset.name, vector))
        logger.debug(f"[FEATURES] {dataset.name}: {len(vector.warnings)} warning(s)")
    return rows


def write_corpus_features(datasets: Sequence[Dataset], config: FeatureConfig, path: PathLike):
    rows = extract_corpus(datasets, config)
    write_features(rows, path, config)
    return rows


def cmd_features(args: argparse.Namespace) -> int:
    config = feature_config_from_args(args)
    datasets = load_corpus(args.corpus, target=args.target)
    kept = admitted_datasets(datasets)
    if not kept:
        raise DatasetValidationError("no dataset passed admission")
    write_corpus_features(kept, config, args.out)
    announce("features_done", count=len(kept), skipped=len(datasets) - len(kept), path=args.out)
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("features", help="Extract meta-features from admissible datasets")
    parser.add_argument("corpus", help="Directory with raw (or canonical) datasets")
    parser.add_argument("--out", required=True, help="Features CSV to write")
    parser.add_argument("--target", help="Target column (default: last column)")
    add_feature_flags(parser)
    parser.set_defaults(handler=cmd_features)
