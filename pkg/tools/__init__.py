from tools.dataset_tools import (
    Column,
    ColumnKind,
    Dataset,
    check_admission,
    load_corpus,
    load_dataset,
    save_dataset,
)
from tools.preprocessing import (
    apply_normalization,
    denormalize_target,
    normalize,
    split_train_test,
)

__all__ = [
    "Column",
    "ColumnKind",
    "Dataset",
    "check_admission",
    "load_corpus",
    "load_dataset",
    "save_dataset",
    "apply_normalization",
    "denormalize_target",
    "normalize",
    "split_train_test",
]
