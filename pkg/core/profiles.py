"""
Performance profiles: run-score and average-score distributions, their
bootstrap bands and variance diagnostics, plus rank distributions.

Profiles use a strict comparison: the value at tau is the fraction of scores
strictly greater than tau.
"""

from collections.abc import Sequence

import numpy as np

from common import config
from common.exceptions import TaskMismatchError
from common.logger import get_logger
from common.models import (
    RUNS_WITHIN_TASKS,
    ProfileCurve,
    ProfileKind,
    RankDistribution,
    ScoreSet,
)
from core.bootstrap import _replicate_values
from core.executor import parallel_map
from core.rng import Namespace, substream
from core.score_data import task_means

logger = get_logger(__name__)

# Replicates per rank-distribution block; block k draws from substream (seed, k)
RANK_BLOCK = 1000

DOMINANCE_A = "a_dominates"
DOMINANCE_B = "b_dominates"
DOMINANCE_EQUAL = "equal"
DOMINANCE_CROSSING = "crossing"


def empirical_tail(samples, tau: float) -> float:
    """Fraction of samples strictly greater than tau."""
    array = np.asarray(samples, dtype=float)
    if array.size == 0:
        raise ValueError("empirical tail of an empty sample")
    return float(np.mean(array > tau))


def _as_grid(taus) -> np.ndarray:
    grid = np.asarray(taus, dtype=float).ravel()
    if grid.size == 0:
        raise ValueError("profile grid must not be empty")
    return grid


def default_tau_grid(sets: Sequence[ScoreSet]) -> np.ndarray:
    """
    Every distinct pooled score across the given sets, plus one point below
    the minimum and one above the maximum, so each jump lies on the grid.
    """
    pooled = np.unique(np.concatenate([s.values for s in sets]))
    spread = pooled[-1] - pooled[0]
    margin = 0.05 * spread if spread > 0 else 1.0
    return np.concatenate([[pooled[0] - margin], pooled, [pooled[-1] + margin]])


def _run_score_values(s: ScoreSet, grid: np.ndarray) -> np.ndarray:
    above = (s.values[:, None] > grid[None, :]).astype(np.int64)
    counts_above = np.add.reduceat(above, s.offsets[:-1], axis=0)
    counts = s.run_counts
    if np.all(counts == counts[0]):
        # equal run counts: same arithmetic as the pooled tail, bit for bit
        return counts_above.sum(axis=0) / (s.num_tasks * counts[0])
    return np.mean(counts_above / counts[:, None], axis=0)


def run_score_distribution(s: ScoreSet, taus) -> ProfileCurve:
    """
    Score distribution: mean over tasks of each task's fraction of runs
    above tau. Tasks weigh equally even when run counts differ.
    """
    grid = _as_grid(taus)
    return ProfileCurve(grid, _run_score_values(s, grid), ProfileKind.RUN_SCORES, s.algorithm_id)


def average_score_distribution(s: ScoreSet, taus) -> ProfileCurve:
    """Fraction of tasks whose mean score is above tau."""
    grid = _as_grid(taus)
    means = task_means(s)
    values = np.mean(means[:, None] > grid[None, :], axis=0)
    return ProfileCurve(grid, values, ProfileKind.TASK_MEANS, s.algorithm_id)


def profile_with_bands(
    s: ScoreSet,
    taus,
    nominal_coverage: float = 0.95,
    replicates: int = 2000,
    seed: int = 0,
) -> ProfileCurve:
    """
    Run-score distribution with pointwise percentile bootstrap bands.

    Each replicate resamples runs within tasks and evaluates the whole
    curve; the band at each tau is the percentile interval at that tau.
    """
    if not 0 < nominal_coverage < 1:
        raise ValueError("nominal_coverage must lie in (0, 1)")
    curve = run_score_distribution(s, taus)
    grid = curve.taus

    replicate_curves = _replicate_values(
        [s],
        lambda resampled: _run_score_values(resampled, grid),
        replicates,
        RUNS_WITHIN_TASKS,
        seed,
        Namespace.PROFILE_BANDS,
    )
    tail = (1 - nominal_coverage) / 2
    lower = np.quantile(replicate_curves, tail, axis=0)
    upper = np.quantile(replicate_curves, 1 - tail, axis=0)

    # the band always contains the point curve
    lower = np.clip(np.minimum(lower, curve.values), 0.0, 1.0)
    upper = np.clip(np.maximum(upper, curve.values), 0.0, 1.0)
    logger.debug_algorithm(
        s.algorithm_id,
        message=f"Profile bands over {grid.size} thresholds, {replicates} replicates",
    )
    return curve.with_bands(lower, upper)


def profile_variance(
    s: ScoreSet, tau: float, resamples: int | None = None, seed: int = 0
) -> tuple[float, float]:
    """
    Plug-in variances of the run-score and the average-score profile at tau.

    sigma_runs_sq = (1/M^2) * sum_m F_m (1 - F_m) / N_m with F_m the task's
    empirical tail. sigma_means_sq = (1/M^2) * sum_m G_m (1 - G_m) with G_m
    the fraction of within-task bootstrap resamples whose mean exceeds tau.

    Returns:
        (sigma_runs_sq, sigma_means_sq)
    """
    resamples = resamples or config.variance_resamples
    m_sq = s.num_tasks**2
    sigma_runs_sq = 0.0
    sigma_means_sq = 0.0
    for m, runs in enumerate(s.task_runs()):
        f = np.mean(runs > tau)
        sigma_runs_sq += f * (1 - f) / runs.size

        rng = substream(seed, m, Namespace.PROFILE_VARIANCE)
        draws = runs[rng.integers(0, runs.size, size=(resamples, runs.size))]
        g = np.mean(draws.mean(axis=1) > tau)
        sigma_means_sq += g * (1 - g)
    return float(sigma_runs_sq / m_sq), float(sigma_means_sq / m_sq)


def profile_area(curve: ProfileCurve, lower_limit: float = 0.0) -> float:
    """
    Exact integral of the right-continuous step curve from lower_limit to
    the last grid point. For non-negative scores and a grid holding every
    jump this is the mean score.

    Below the first grid point the curve is taken to be 1, since the grid
    is assumed to cover the support.
    """
    taus, values = curve.taus, curve.values
    area = 0.0
    if lower_limit < taus[0]:
        area += taus[0] - lower_limit
    starts = np.maximum(taus[:-1], lower_limit)
    widths = np.clip(taus[1:] - starts, 0.0, None)
    area += float(np.sum(values[:-1] * widths))
    return area


def readout_median(curve: ProfileCurve) -> float | None:
    """Smallest tau where the profile is at or below one half."""
    below = np.flatnonzero(curve.values <= 0.5)
    return float(curve.taus[below[0]]) if below.size else None


def _check_shared_grid(curves: Sequence[ProfileCurve]) -> np.ndarray:
    if not curves:
        raise ValueError("need at least one profile")
    grid = curves[0].taus
    for curve in curves[1:]:
        if not np.array_equal(curve.taus, grid):
            raise ValueError(
                f"profile of {curve.algorithm_id!r} uses a different grid"
            )
    return grid


def rescaled_tau_axis(profiles: Sequence[ProfileCurve]) -> dict[float, float]:
    """
    Non-linear tau axis: the spacing between two thresholds is proportional
    to the fraction of runs, averaged over profiles, lying between them.

    Returns:
        Mapping of each grid tau to its axis coordinate in [0, 1]
    """
    grid = _check_shared_grid(profiles)
    coordinate = 1.0 - np.mean([p.values for p in profiles], axis=0)
    span = coordinate[-1] - coordinate[0]
    if span > 0:
        scaled = (coordinate - coordinate[0]) / span
    elif grid.size > 1:
        scaled = (grid - grid[0]) / (grid[-1] - grid[0])
    else:
        scaled = np.zeros(1)
    scaled = np.clip(scaled, 0.0, 1.0)
    return {float(t): float(c) for t, c in zip(grid, scaled)}


def dominance(curve_a: ProfileCurve, curve_b: ProfileCurve) -> str:
    """
    Descriptive stochastic dominance on a shared grid: a dominates b when
    its profile is at or above b everywhere and strictly above somewhere.
    """
    _check_shared_grid([curve_a, curve_b])
    diff = curve_a.values - curve_b.values
    if np.all(diff == 0):
        return DOMINANCE_EQUAL
    if np.all(diff >= 0):
        return DOMINANCE_A
    if np.all(diff <= 0):
        return DOMINANCE_B
    return DOMINANCE_CROSSING


def _check_common_task_list(sets: Sequence[ScoreSet]) -> tuple[str, ...]:
    tasks = sets[0].tasks
    for s in sets[1:]:
        if set(s.tasks) != set(tasks):
            raise TaskMismatchError(
                f"{s.algorithm_id!r} does not share the task list of "
                f"{sets[0].algorithm_id!r}"
            )
    return tasks


def _rank_mass(means: np.ndarray) -> np.ndarray:
    """
    Rank probability mass for a (replicates, A) matrix of task means.

    Rank 1 is the highest mean. A group of t tied algorithms spreads each
    member's unit mass evenly over the t ranks the group occupies.
    """
    size = means.shape[1]
    better = (means[:, None, :] > means[:, :, None]).sum(axis=2)
    tied = (means[:, None, :] == means[:, :, None]).sum(axis=2)
    mass = np.zeros((size, size))
    for r in range(size):
        inside = (better <= r) & (r < better + tied)
        mass[:, r] = np.sum(inside / tied, axis=0)
    return mass


def rank_distribution(
    sets: Sequence[ScoreSet], replicates: int = 200000, seed: int = 0
) -> RankDistribution:
    """
    Bootstrap distribution of each algorithm's rank on each task.

    Every replicate resamples each algorithm's runs within the task and
    ranks algorithms by resampled task mean.
    """
    if not sets:
        raise ValueError("rank distribution needs at least one score set")
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    tasks = _check_common_task_list(sets)
    size = len(sets)
    task_runs = [[s.runs(task) for s in sets] for task in tasks]

    def evaluate(start: int, stop: int) -> np.ndarray:
        rng = substream(seed, start // RANK_BLOCK, Namespace.RANKS)
        block = stop - start
        counts = np.zeros((len(tasks), size, size))
        for m, runs_by_algorithm in enumerate(task_runs):
            means = np.column_stack(
                [
                    runs[rng.integers(0, runs.size, size=(block, runs.size))].mean(axis=1)
                    for runs in runs_by_algorithm
                ]
            )
            counts[m] = _rank_mass(means)
        return counts

    blocks = parallel_map(evaluate, replicates, chunk_size=RANK_BLOCK)
    totals = np.zeros((len(tasks), size, size))
    for block in blocks:
        totals += block
    per_task = {task: totals[m] / replicates for m, task in enumerate(tasks)}
    mean_matrix = np.mean(totals / replicates, axis=0)

    return RankDistribution(
        algorithms=tuple(s.algorithm_id for s in sets),
        per_task=per_task,
        mean_matrix=mean_matrix,
        replicates=replicates,
        seed=seed,
    )
