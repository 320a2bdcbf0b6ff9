from handlers.ingest import register as register_ingest
from handlers.features import register as register_features
from handlers.sweep import register as register_sweep
from handlers.metabase import register as register_metabase
from handlers.meta import register as register_meta
from handlers.report import register as register_report
from handlers.pipeline import register as register_pipeline

__all__ = [
    "register_ingest",
    "register_features",
    "register_sweep",
    "register_metabase",
    "register_meta",
    "register_report",
    "register_pipeline",
]
