"""
Ingest Handler - load a corpus, check admission, write canonical datasets

Flow:
- Every CSV/ARFF file in the corpus directory is loaded
- Files that fail to parse are reported, not fatal for the others
- Admitted datasets are written in canonical form (CSV + schema sidecar)
- admission.csv lists every file with its counts and reasons
"""

import argparse
from pathlib import Path
from typing import List, NamedTuple, Optional

from loguru import logger

from exceptions import DatasetError
from handlers.common import announce, require_path
from tools.dataset_tools import Dataset, check_admission, list_corpus_files, load_dataset, save_dataset
from tools.preprocessing import normalize
from utils.files import PathLike, ensure_dir, write_csv

ADMISSION_HEADER = ["dataset", "row_count", "distinct_target_values", "admitted", "reasons"]


class IngestOutcome(NamedTuple):
    admitted: List[Dataset]
    rows: List[tuple]

    @property
    def rejected(self) -> int:
        return len(self.rows) - len(self.admitted)


def ingest_corpus(
    corpus_dir: PathLike,
    out_dir: Optional[PathLike] = None,
    target: Optional[str] = None,
    normalize_data: bool = False,
    keep_inadmissible: bool = False,
) -> IngestOutcome:
    """
    Load and screen a corpus.

    Args:
        corpus_dir: Directory with CSV/ARFF files
        out_dir: Where datasets/ and admission.csv go; nothing is written when None
        target: Target column name; last column by default
        normalize_data: Write normalized datasets instead of raw ones
        keep_inadmissible: Also keep datasets that fail admission

    Returns:
        Raw datasets that passed (in file-name order) and the admission rows
    """
    kept, rows = [], []
    for path in list_corpus_files(require_path(corpus_dir, "corpus directory", directory=True)):
        try:
            dataset = load_dataset(path, target=target)
        except DatasetError as e:
            logger.error(f"[INGEST] {path.name}: {e.message}")
            rows.append((path.stem, 0, 0, False, e.message))
            continue

        report = check_admission(dataset)
        rows.append(
            (dataset.name, report.row_count, report.distinct_target_values, report.admitted, "; ".join(report.reasons))
        )
        if not report.admitted:
            logger.warning(f"[INGEST] {dataset.name} not admitted: {'; '.join(report.reasons)}")
            if not keep_inadmissible:
                continue
        kept.append(dataset)

    names = [d.name for d in kept]
    duplicates = sorted({n for n in names if names.count(n) > 1})
    if duplicates:
        raise DatasetError(f"several corpus files map to the same dataset name: {', '.join(duplicates)}")

    if out_dir is not None:
        out_dir = ensure_dir(out_dir)
        datasets_dir = ensure_dir(Path(out_dir) / "datasets")
        for dataset in kept:
            stored = normalize(dataset) if normalize_data and not dataset.normalized else dataset
            save_dataset(stored, datasets_dir / f"{dataset.name}.csv")
        write_csv(Path(out_dir) / "admission.csv", ADMISSION_HEADER, rows)
    return IngestOutcome(admitted=kept, rows=rows)


def cmd_ingest(args: argparse.Namespace) -> int:
    outcome = ingest_corpus(
        args.corpus,
        args.out,
        target=args.target,
        normalize_data=args.normalize,
        keep_inadmissible=args.keep_inadmissible,
    )
    announce("ingest_done", count=len(outcome.rows), admitted=len(outcome.admitted), rejected=outcome.rejected)
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("ingest", help="Load a corpus and write canonical datasets")
    parser.add_argument("corpus", help="Directory with CSV/ARFF datasets")
    parser.add_argument("--out", required=True, help="Output directory")
    parser.add_argument("--target", help="Target column (default: last column)")
    parser.add_argument("--normalize", action="store_true", help="Store normalized datasets")
    parser.add_argument("--keep-inadmissible", action="store_true", help="Keep datasets failing admission")
    parser.set_defaults(handler=cmd_ingest)
