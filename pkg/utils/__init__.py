from utils.files import config_hash, read_json, sanitize_dataset_name, write_csv, write_json
from utils.progress import SweepTracker

__all__ = [
    "config_hash",
    "read_json",
    "sanitize_dataset_name",
    "write_csv",
    "write_json",
    "SweepTracker",
]
