from search.label_search import SweepConfig, SweepResult, label_histogram, run_sweep, sweep_corpus

__all__ = ["SweepConfig", "SweepResult", "label_histogram", "run_sweep", "sweep_corpus"]
