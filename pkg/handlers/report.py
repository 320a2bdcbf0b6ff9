"""
Report Handler - histogram of best hidden-neuron counts
"""

import argparse
from pathlib import Path
from typing import List, Optional, Tuple

from config import HISTOGRAM_BIN_WIDTH
from handlers.common import announce, require_path
from search.label_search import (
    HistogramBin,
    SweepConfig,
    SweepLabel,
    label_histogram,
    load_sweep,
    read_summary,
    write_histogram,
)
from utils.files import PathLike


def read_labels(source: PathLike) -> Tuple[List[SweepLabel], Optional[SweepConfig]]:
    """
    Labels from a sweep summary CSV or from a directory of sweep JSON files.

    The sweep config comes back only for a directory whose sweeps all share one.
    """
    source = Path(source)
    if not source.is_dir():
        return read_summary(require_path(source, "sweep summary")), None
    sweeps = [load_sweep(p) for p in sorted(source.glob("*.json"))]
    configs = {s.config for s in sweeps}
    return [s.label() for s in sweeps], configs.pop() if len(configs) == 1 else None


def write_report(
    labels: List[SweepLabel],
    out: PathLike,
    bin_width: int = HISTOGRAM_BIN_WIDTH,
    n_min: Optional[int] = None,
    n_max: Optional[int] = None,
    sweep_config: Optional[SweepConfig] = None,
) -> List[HistogramBin]:
    bins = label_histogram(labels, bin_width, n_min, n_max)
    write_histogram(bins, out, bin_width, sweep_config)
    return bins


def cmd_report(args: argparse.Namespace) -> int:
    labels, sweep_config = read_labels(args.source)
    bins = write_report(labels, args.out, args.bin_width, args.n_min, args.n_max, sweep_config)
    announce("report_done", bins=len(bins), count=len(labels), path=args.out)
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("report", help="Histogram of the best hidden-neuron counts")
    parser.add_argument("source", help="Sweep summary CSV or directory of sweep JSON files")
    parser.add_argument("--out", required=True, help="Histogram CSV to write")
    parser.add_argument("--bin-width", type=int, default=HISTOGRAM_BIN_WIDTH)
    parser.add_argument("--n-min", type=int, help="Range start (default: from the sweeps)")
    parser.add_argument("--n-max", type=int, help="Range end (default: from the sweeps)")
    parser.set_defaults(handler=cmd_report)
