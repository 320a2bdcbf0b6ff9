"""
Sweep Handler - best hidden-neuron count per dataset

Writes one JSON file per swept dataset under <out>/sweeps/ and the corpus
summary <out>/sweep_summary.csv.
"""

import argparse
from pathlib import Path
from typing import Sequence

from loguru import logger

from exceptions import SweepError
from handlers.common import add_common_flags, add_sweep_flags, announce, resolve_workers, sweep_config_from_args
from search.label_search import CorpusSweep, SweepConfig, save_sweep, sweep_corpus, write_summary
from tools.dataset_tools import Dataset, load_corpus
from tools.preprocessing import normalize
from utils.files import PathLike, ensure_dir

SUMMARY_NAME = "sweep_summary.csv"


def run_corpus_sweep(
    datasets: Sequence[Dataset],
    config: SweepConfig,
    out_dir: PathLike,
    workers: int = 1,
) -> CorpusSweep:
    """Normalize where needed, sweep, and persist per-dataset results plus the summary."""
    prepared = [d if d.normalized else normalize(d) for d in datasets]
    outcome = sweep_corpus(prepared, config, workers)
    if not outcome.results:
        raise SweepError(f"no dataset could be swept ({len(outcome.failures)} failure(s))")

    out_dir = ensure_dir(out_dir)
    sweeps_dir = ensure_dir(Path(out_dir) / "sweeps")
    for result in outcome.results:
        save_sweep(result, sweeps_dir / f"{result.dataset_name}.json")
    write_summary([r.label() for r in outcome.results], Path(out_dir) / SUMMARY_NAME)
    for failure in outcome.failures:
        logger.warning(f"[SWEEP] skipped {failure.dataset_name}: {failure.reason}")
    return outcome


def cmd_sweep(args: argparse.Namespace) -> int:
    config = sweep_config_from_args(args)
    workers = resolve_workers(args.workers)
    datasets = load_corpus(args.corpus, target=args.target)
    outcome = run_corpus_sweep(datasets, config, args.out, workers)
    announce(
        "sweep_done",
        count=len(outcome.results),
        failed=len(outcome.failures),
        path=Path(args.out) / SUMMARY_NAME,
    )
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("label-sweep", help="Find the best hidden-neuron count per dataset")
    parser.add_argument("corpus", help="Directory with datasets")
    parser.add_argument("--out", required=True, help="Output directory")
    parser.add_argument("--target", help="Target column (default: last column)")
    add_sweep_flags(parser)
    add_common_flags(parser)
    parser.set_defaults(handler=cmd_sweep)
