"""
Pipeline stage definitions for the hidden-neuron advisor
"""

from contextlib import contextmanager
from enum import Enum

from loguru import logger

from exceptions import AdvisorError, PipelineStageError


class PipelineStage(str, Enum):
    """Steps of the end-to-end pipeline, in execution order."""

    INGEST = "ingest"  # Load, check admission, write canonical datasets
    FEATURES = "features"  # 16 meta-features per raw dataset
    SWEEP = "label-sweep"  # Best hidden-neuron count per normalized dataset
    METABASE = "build-metabase"  # Join features and labels
    EVALUATE = "evaluate"  # Leave-one-out comparison of meta-learners
    TRAIN = "train-meta"  # Final meta-learner on the whole meta-base
    REPORT = "report"  # Label histogram


@contextmanager
def run_stage(stage: PipelineStage):
    """Tag any failure inside the block with the stage name, keeping its exit code."""
    logger.info(f"[PIPELINE] stage {stage.value} started")
    try:
        yield stage
    except AdvisorError as e:
        e.message = f"[{stage.value}] {e.message}"
        e.user_message = f"Stage '{stage.value}' failed: {e.user_message}"
        raise
    except Exception as e:
        raise PipelineStageError(stage.value, f"{type(e).__name__}: {e}") from e
    logger.info(f"[PIPELINE] stage {stage.value} done")
