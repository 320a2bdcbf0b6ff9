"""
Pipeline Handler - the whole chain from one JSON config

Flow:
- ingest -> features -> label-sweep -> build-metabase -> evaluate -> train-meta -> report
- Every artifact lands in the output directory; run.log is the only one with timestamps
- A failure is re-raised tagged with its stage name
"""

import argparse
from pathlib import Path
from typing import Dict

from loguru import logger

from config import TOOL_VERSION
from exceptions import DatasetValidationError
from handlers.common import PipelineConfig, add_common_flags, announce, load_pipeline_config
from handlers.features import write_corpus_features
from handlers.ingest import ingest_corpus
from handlers.meta import evaluate_learners, train_meta
from handlers.report import write_report
from handlers.sweep import run_corpus_sweep
from metabase.store import build_metabase, save_metabase
from stages import PipelineStage, run_stage
from utils.files import ensure_dir, write_json

BASELINE_FAMILIES = ("mean", "heuristic")


def _final_learner(config: PipelineConfig, rows) -> str:
    if config.final_learner:
        return config.final_learner
    families = {s.name: s.family for s in config.learners}
    candidates = [r for r in rows if families[r.method] not in BASELINE_FAMILIES]
    return (candidates or rows)[0].method


def run_pipeline(config: PipelineConfig) -> Dict[str, Path]:
    """
    Run every stage for a validated config.

    Returns:
        Artifact paths by name
    """
    out = ensure_dir(config.output_dir)
    artifacts = {
        "config": out / "pipeline.json",
        "admission": out / "admission.csv",
        "features": out / "features.csv",
        "summary": out / "sweep_summary.csv",
        "metabase": out / "metabase.csv",
        "evaluation": out / "evaluation" / "evaluation.csv",
        "model": out / "model.json",
        "histogram": out / "histogram.csv",
    }
    write_json(artifacts["config"], {**config.to_dict(), "config_hash": config.hash(), "tool_version": TOOL_VERSION})

    with run_stage(PipelineStage.INGEST):
        ingested = ingest_corpus(config.corpus_dir, out, target=config.target)
        if not ingested.admitted:
            raise DatasetValidationError("no dataset passed admission")

    with run_stage(PipelineStage.FEATURES):
        vectors = write_corpus_features(ingested.admitted, config.features, artifacts["features"])

    with run_stage(PipelineStage.SWEEP):
        sweep = run_corpus_sweep(ingested.admitted, config.sweep, out, config.workers)

    with run_stage(PipelineStage.METABASE):
        metabase = build_metabase(vectors, sweep.results, feature_config=config.features)
        metabase.provenance["pipeline_config_hash"] = config.hash()
        save_metabase(metabase, artifacts["metabase"])

    with run_stage(PipelineStage.EVALUATE):
        rows = evaluate_learners(
            config.learners,
            metabase,
            artifacts["evaluation"].parent,
            config.workers,
            expected_hash=config.features.hash(),
        )

    with run_stage(PipelineStage.TRAIN):
        chosen = _final_learner(config, rows)
        spec = next(s for s in config.learners if s.name == chosen)
        train_meta(spec, metabase, artifacts["model"])
        logger.info(f"[PIPELINE] final meta-learner: {chosen}")

    with run_stage(PipelineStage.REPORT):
        write_report(
            [r.label() for r in sweep.results], artifacts["histogram"], config.bin_width, sweep_config=config.sweep
        )

    return artifacts


def cmd_pipeline(args: argparse.Namespace) -> int:
    config = load_pipeline_config(args.config, args)
    out = ensure_dir(config.output_dir)
    sink = logger.add(out / "run.log", level="DEBUG", mode="w", encoding="utf-8")
    try:
        logger.info(f"[PIPELINE] config {config.hash()} | workers: {config.workers}")
        run_pipeline(config)
    finally:
        logger.remove(sink)
    announce("pipeline_done", path=out)
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("pipeline", help="Run the full chain from a JSON config")
    parser.add_argument("config", help="Pipeline JSON config")
    parser.add_argument("--corpus", help="Override the corpus directory")
    parser.add_argument("--output", help="Override the output directory")
    add_common_flags(parser)
    parser.set_defaults(handler=cmd_pipeline)
