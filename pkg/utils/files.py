"""
File helpers shared by every stage.
Dataset naming, sidecar paths, JSON/CSV writing and config hashing.
"""

import hashlib
import json
import os
import re
from pathlib import Path
from typing import Any, Dict, Iterable, Sequence, Union

import pandas as pd
from loguru import logger

from exceptions import TableLayoutError

PathLike = Union[str, Path]

# 17 significant digits round-trip every float64
CSV_FLOAT_FORMAT = "%.17g"


def sanitize_dataset_name(filename: str) -> str:
    """
    Turn a file name into a dataset name safe to use in artifact paths.

    Args:
        filename: File name or path, with or without extension

    Returns:
        Name with only ASCII alphanumerics, dot, underscore and hyphen
    """
    stem = Path(filename.replace("\\", "/").replace("\x00", "")).stem

    safe_chars = []
    for char in stem:
        if char.isascii() and (char.isalnum() or char in "._-"):
            safe_chars.append(char)
        elif char == " ":
            safe_chars.append("_")

    safe_name = "".join(safe_chars).strip("._")
    return safe_name or "dataset"


def sidecar_path(path: PathLike, suffix: str) -> Path:
    """Path of the JSON file that travels next to a CSV (``x.csv`` -> ``x<suffix>``)."""
    path = Path(path)
    return path.with_name(path.stem + suffix)


def ensure_dir(path: PathLike) -> Path:
    """Create a directory if missing and return it."""
    path = Path(path)
    if not path.exists():
        os.makedirs(path)
    return path


def write_json(path: PathLike, payload: Dict[str, Any]) -> Path:
    """Write a JSON document with sorted keys so reruns are byte-identical."""
    path = Path(path)
    ensure_dir(path.parent)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    logger.debug(f"Wrote {path}")
    return path


def read_json(path: PathLike) -> Dict[str, Any]:
    """Read a JSON document."""
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """
    Write rows under a header row with pandas.

    Float columns use CSV_FLOAT_FORMAT (lossless), None becomes an empty
    cell and lines end in a bare newline so reruns are byte-identical.
    """
    path = Path(path)
    ensure_dir(path.parent)
    frame = pd.DataFrame([tuple(row) for row in rows], columns=list(header))
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, na_rep="", lineterminator="\n", encoding="utf-8")
    logger.debug(f"Wrote {path}")
    return path


def read_csv_table(path: PathLike, header: Sequence[str]) -> pd.DataFrame:
    """
    Read a CSV written by ``write_csv`` with every cell as a string.

    Empty cells read as "". A wrong header, or a row with missing or extra
    fields, raises TableLayoutError naming the file line.
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError as e:
        raise TableLayoutError(str(path), 1, "missing header") from e
    except pd.errors.ParserError as e:
        found = re.search(r"line (\d+), saw (\d+)", str(e))
        if found is None:
            raise TableLayoutError(str(path), 0, str(e)) from e
        line, n_fields = int(found.group(1)), int(found.group(2))
        raise TableLayoutError(str(path), line, f"{n_fields} fields, expected {len(header)}", n_fields) from e

    if [str(c) for c in frame.columns] != list(header):
        raise TableLayoutError(str(path), 1, f"header {','.join(map(str, frame.columns))}, expected {','.join(header)}")

    # pandas pads short rows with NaN even when no NA markers are parsed
    short = frame.isna().any(axis=1).to_numpy()
    if short.any():
        position = int(short.argmax())
        n_fields = int(frame.iloc[position].notna().sum())
        raise TableLayoutError(str(path), position + 2, f"{n_fields} fields, expected {len(header)}", n_fields)
    return frame


def table_rows(frame: pd.DataFrame):
    """(file line, row tuple) pairs; data starts on line 2."""
    return enumerate(frame.itertuples(index=False, name=None), start=2)


def config_hash(payload: Dict[str, Any]) -> str:
    """First 16 hex chars of SHA-256 over the canonical JSON of a config."""
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]
