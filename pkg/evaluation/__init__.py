from evaluation.loo import LooReport, compare_report, loo_evaluate, pearson, rae

__all__ = ["LooReport", "compare_report", "loo_evaluate", "pearson", "rae"]
