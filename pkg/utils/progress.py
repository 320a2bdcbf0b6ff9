"""
Sweep Tracker - running totals of ELM trainings, logged to stderr.
"""

import time
from typing import Dict

from loguru import logger


class SweepTracker:
    """Track trainings and failures across a corpus sweep."""

    def __init__(self):
        self.datasets_done = 0
        self.datasets_failed = 0
        self.total_trainings = 0
        self.total_failures = 0
        self._started = time.monotonic()

    def add_dataset(self, name: str, trainings: int, failures: int, best_count: int, seconds: float):
        """Add one finished dataset and log the running totals."""
        self.datasets_done += 1
        self.total_trainings += trainings
        self.total_failures += failures

        logger.info(
            f"[SWEEP] {name} | best L: {best_count} | "
            f"trainings: {trainings} ({failures} failed) | {seconds:.1f}s"
        )
        logger.info(
            f"[TOTAL] datasets: {self.datasets_done} ok, {self.datasets_failed} failed | "
            f"trainings: {self.total_trainings} | elapsed: {self.elapsed():.1f}s"
        )

    def add_failure(self, name: str, reason: str):
        self.datasets_failed += 1
        logger.error(f"[SWEEP] {name} failed: {reason}")

    def elapsed(self) -> float:
        return time.monotonic() - self._started

    def get_stats(self) -> Dict[str, float]:
        return {
            "datasets_done": self.datasets_done,
            "datasets_failed": self.datasets_failed,
            "trainings": self.total_trainings,
            "failed_trainings": self.total_failures,
            "elapsed_seconds": self.elapsed(),
        }
