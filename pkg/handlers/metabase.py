"""
Meta-Base Handler - join meta-features and sweep labels
"""

import argparse

from features.meta_features import read_features
from handlers.common import announce, require_path
from metabase.store import build_metabase, save_metabase
from search.label_search import read_summary


def cmd_build_metabase(args: argparse.Namespace) -> int:
    vectors, feature_config = read_features(require_path(args.features, "features CSV"))
    labels = read_summary(require_path(args.summary, "sweep summary"))
    metabase = build_metabase(vectors, labels, feature_config=feature_config)
    save_metabase(metabase, args.out)
    announce("metabase_done", count=len(metabase), path=args.out, skipped=len(metabase.provenance["skipped"]))
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("build-metabase", help="Join features and sweep labels into a meta-base")
    parser.add_argument("--features", required=True, help="Features CSV from 'features'")
    parser.add_argument("--summary", required=True, help="Summary CSV from 'label-sweep'")
    parser.add_argument("--out", required=True, help="metabase.csv to write (sidecar .meta.json alongside)")
    parser.set_defaults(handler=cmd_build_metabase)
