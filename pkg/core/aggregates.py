"""
Aggregate performance metrics over a score set.

Mean and median act on task means. IQM, optimality gap, difficulty
progress and superhuman probability act on the pooled run scores.
"""

import math
from collections.abc import Callable
from functools import partial

import numpy as np
from scipy import stats

from common.exceptions import TaskMismatchError, UsageError
from common.models import MetricKind, MetricSpec, ScoreSet
from core.score_data import pooled_scores, task_means

Statistic = Callable[[ScoreSet], float]

# CLI aliases on top of the canonical MetricKind values
METRIC_ALIASES = {
    "dp25": MetricKind.DIFFICULTY_PROGRESS,
    "dp-25": MetricKind.DIFFICULTY_PROGRESS,
    "superhuman": MetricKind.SUPERHUMAN_PROB,
    "og": MetricKind.OPTIMALITY_GAP,
}

DEFAULT_METRICS = ("median", "iqm", "mean", "optimality_gap")


def mean_of_task_means(s: ScoreSet) -> float:
    return float(np.mean(task_means(s)))


def median_of_task_means(s: ScoreSet) -> float:
    """Median of task means; an even task count averages the two middle values."""
    return float(np.median(task_means(s)))


def iqm(s: ScoreSet, trim_fraction: float = 0.25) -> float:
    """
    Interquartile mean of the pooled runs.

    Sorts the K pooled scores, drops floor(trim_fraction * K) from each end
    and averages the rest. trim_fraction = 0 is the pooled mean.
    """
    if not 0 <= trim_fraction < 0.5:
        raise ValueError("trim_fraction must lie in [0, 0.5)")
    pooled = pooled_scores(s)
    # scipy slices off int(trim_fraction * K) from each end
    assert pooled.size - 2 * int(trim_fraction * pooled.size) > 0
    return float(stats.trim_mean(pooled, trim_fraction))


def optimality_gap(s: ScoreSet, gamma: float = 1.0) -> float:
    """Mean shortfall of the pooled runs below gamma, E[max(gamma - x, 0)]."""
    return float(np.mean(np.maximum(gamma - pooled_scores(s), 0.0)))


def optimality_gap_curve(s: ScoreSet, gammas) -> list[tuple[float, float]]:
    """
    Optimality gap divided by gamma, for every gamma of an ascending grid.

    Raises:
        ValueError: Any gamma <= 0
    """
    grid = np.asarray(gammas, dtype=float)
    if grid.size == 0 or np.any(grid <= 0):
        raise ValueError("optimality gap curve needs gammas > 0")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("gammas must be strictly ascending")
    pooled = pooled_scores(s)
    gaps = np.mean(np.maximum(grid[:, None] - pooled[None, :], 0.0), axis=1)
    return [(float(g), float(gap / g)) for g, gap in zip(grid, gaps)]


def difficulty_progress(s: ScoreSet, fraction: float = 0.25) -> float:
    """Mean of the ceil(fraction * K) lowest pooled scores (DP-25 by default)."""
    if not 0 < fraction <= 1:
        raise ValueError("fraction must lie in (0, 1]")
    pooled = pooled_scores(s)
    # guard against 0.25 * 8 = 2.0000000000000004 style rounding up
    count = max(1, math.ceil(round(fraction * pooled.size, 9)))
    return float(np.mean(np.partition(pooled, count - 1)[:count]))


def superhuman_probability(s: ScoreSet, threshold: float = 1.0) -> float:
    """Fraction of pooled runs strictly above threshold."""
    return float(np.mean(pooled_scores(s) > threshold))


def _check_common_tasks(x: ScoreSet, y: ScoreSet) -> None:
    if set(x.tasks) != set(y.tasks):
        missing = sorted(set(x.tasks) ^ set(y.tasks))
        raise TaskMismatchError(
            f"{x.algorithm_id!r} and {y.algorithm_id!r} differ on tasks: {missing}"
        )


def task_improvement_probabilities(x: ScoreSet, y: ScoreSet) -> np.ndarray:
    """
    Mann-Whitney P(X_m > Y_m) for every task of x, ties counting one half.

    Tasks are matched by name; the result follows x's task order.
    """
    _check_common_tasks(x, y)
    probabilities = np.empty(x.num_tasks)
    for m, task in enumerate(x.tasks):
        x_runs, y_runs = x.runs(m), y.runs(task)
        # sign is 1, 0, -1 for x > y, x == y, x < y; S = (sign + 1) / 2
        signs = np.sign(x_runs[:, None] - y_runs[None, :])
        probabilities[m] = (np.sum(signs) + signs.size) / (2 * signs.size)
    return probabilities


def probability_of_improvement(x: ScoreSet, y: ScoreSet) -> float:
    """Unweighted average over tasks of P(X_m > Y_m)."""
    return float(np.mean(task_improvement_probabilities(x, y)))


_METRIC_FUNCTIONS: dict[MetricKind, Callable[..., float]] = {
    MetricKind.MEAN: mean_of_task_means,
    MetricKind.MEDIAN: median_of_task_means,
    MetricKind.IQM: iqm,
    MetricKind.OPTIMALITY_GAP: optimality_gap,
    MetricKind.DIFFICULTY_PROGRESS: difficulty_progress,
    MetricKind.SUPERHUMAN_PROB: superhuman_probability,
}


def parse_metric_kind(name: str) -> MetricKind:
    """
    Resolve a metric name or alias.

    Raises:
        UsageError: Unknown name
    """
    key = name.strip().lower()
    if key in METRIC_ALIASES:
        return METRIC_ALIASES[key]
    try:
        return MetricKind(key)
    except ValueError:
        known = sorted([k.value for k in MetricKind] + list(METRIC_ALIASES))
        raise UsageError(f"Unknown metric {name!r}, expected one of {known}") from None


def metric_statistic(spec: MetricSpec) -> Statistic:
    """Return the ScoreSet -> float function for a metric spec."""
    fn = _METRIC_FUNCTIONS[spec.kind]
    if spec.kind in (MetricKind.IQM, MetricKind.DIFFICULTY_PROGRESS):
        return partial(fn, **{_fraction_arg(spec.kind): spec.trim_fraction})
    if spec.kind == MetricKind.OPTIMALITY_GAP:
        return partial(fn, gamma=spec.gamma)
    if spec.kind == MetricKind.SUPERHUMAN_PROB:
        return partial(fn, threshold=spec.gamma)
    return fn


def _fraction_arg(kind: MetricKind) -> str:
    return "trim_fraction" if kind == MetricKind.IQM else "fraction"


def statistic_by_name(name: str, trim_fraction: float = 0.25, gamma: float = 1.0) -> Statistic:
    """Metric function from a name such as 'iqm' or 'dp25'."""
    kind = parse_metric_kind(name)
    if kind != MetricKind.IQM and kind != MetricKind.DIFFICULTY_PROGRESS:
        trim_fraction = 0.25
    return metric_statistic(MetricSpec(kind, trim_fraction=trim_fraction, gamma=gamma))
