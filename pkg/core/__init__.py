from .aggregates import (
    iqm,
    mean_of_task_means,
    median_of_task_means,
    optimality_gap,
    probability_of_improvement,
    statistic_by_name,
)
from .bootstrap import confidence_interval, paired_confidence_interval
from .executor import initialize_executor, shutdown_executor
from .profiles import profile_with_bands, rank_distribution, run_score_distribution
from .score_data import load_scores, normalize

__all__ = [
    "iqm",
    "mean_of_task_means",
    "median_of_task_means",
    "optimality_gap",
    "probability_of_improvement",
    "statistic_by_name",
    "confidence_interval",
    "paired_confidence_interval",
    "initialize_executor",
    "shutdown_executor",
    "profile_with_bands",
    "rank_distribution",
    "run_score_distribution",
    "load_scores",
    "normalize",
]
