"""
Stratified bootstrap and confidence intervals.

Replicate ``b`` always draws from the substream (seed, b), so a bootstrap
distribution is a pure function of its inputs and seed regardless of how
many workers evaluate it.
"""

from collections.abc import Callable, Sequence

import numpy as np
from scipy.stats import norm

from common.exceptions import EstimationError, TaskMismatchError
from common.logger import get_logger
from common.models import (
    RUNS_WITHIN_TASKS,
    CiMethod,
    IntervalEstimate,
    ResampleKind,
    ResampleStrategy,
    ScoreSet,
)
from core.executor import parallel_map
from core.rng import Namespace, derive_seed, substream

logger = get_logger(__name__)

MIN_REPLICATES = 10


def quantile(samples, q: float) -> float:
    """
    Linear-interpolation empirical quantile; q=0 is the min, q=1 the max.

    Raises:
        ValueError: Empty samples or q outside [0, 1]
    """
    array = np.asarray(samples, dtype=float)
    if array.size == 0:
        raise ValueError("quantile of an empty sample")
    if not 0 <= q <= 1:
        raise ValueError("q must lie in [0, 1]")
    return float(np.quantile(array, q))


def _unique_names(tasks: Sequence[str]) -> list[str]:
    """Suffix repeated task names so a task-resampled set keeps unique names."""
    seen: dict[str, int] = {}
    names = []
    for task in tasks:
        count = seen.get(task, 0)
        names.append(task if count == 0 else f"{task}#{count}")
        seen[task] = count + 1
    return names


def stratified_resample(
    s: ScoreSet,
    strategy: ResampleStrategy,
    rng: np.random.Generator,
    drawn_tasks: Sequence[str] | None = None,
) -> ScoreSet:
    """
    Draw one bootstrap replicate of a score set.

    runs_within_tasks keeps every task in place and draws its runs with
    replacement from that task only. tasks_and_runs first draws M tasks with
    replacement, then resamples runs within each drawn task.

    Args:
        s: Score set to resample
        strategy: Resampling scheme and optional m/n subsample size
        rng: Random generator for this replicate
        drawn_tasks: Task names to use instead of drawing them, so several
            sets can share one task draw under tasks_and_runs

    Returns:
        Resampled ScoreSet
    """
    strategy.validate(s)

    if strategy.kind == ResampleKind.TASKS_AND_RUNS:
        if drawn_tasks is None:
            picked = rng.integers(0, s.num_tasks, size=s.num_tasks)
        else:
            picked = np.array([s.tasks.index(task) for task in drawn_tasks], dtype=np.int64)
        tasks = _unique_names([s.tasks[m] for m in picked])
    else:
        picked = np.arange(s.num_tasks)
        tasks = list(s.tasks)

    counts = s.run_counts[picked]
    sizes = counts if strategy.subsample_size is None else np.full_like(counts, strategy.subsample_size)

    # one integers() call for all draws: high varies per draw
    highs = np.repeat(counts, sizes)
    starts = np.repeat(s.offsets[:-1][picked], sizes)
    indices = starts + rng.integers(0, highs)

    offsets = np.concatenate([[0], np.cumsum(sizes)])
    return ScoreSet(s.algorithm_id, tuple(tasks), s.values[indices], offsets)


def _replicate_values(
    sets: Sequence[ScoreSet],
    fn: Callable[..., float | np.ndarray],
    replicates: int,
    strategy: ResampleStrategy,
    seed: int,
    namespace: int = Namespace.BOOTSTRAP,
) -> np.ndarray:
    """
    Evaluate ``fn`` on ``replicates`` independent stratified resamples.

    Each replicate resamples every set in ``sets`` independently, in order,
    from the same substream. Under tasks_and_runs the sets share a single
    task draw. Vector-valued ``fn`` gives a 2-D result.
    """
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    share_tasks = strategy.kind == ResampleKind.TASKS_AND_RUNS and len(sets) > 1

    def evaluate(start: int, stop: int) -> list[np.ndarray]:
        values = []
        for b in range(start, stop):
            rng = substream(seed, b, namespace)
            drawn = None
            if share_tasks:
                first = sets[0]
                drawn = [first.tasks[m] for m in rng.integers(0, first.num_tasks, size=first.num_tasks)]
            try:
                resampled = [stratified_resample(s, strategy, rng, drawn) for s in sets]
            except ValueError as e:
                raise TaskMismatchError(f"score sets do not share tasks: {e}") from e
            try:
                values.append(np.asarray(fn(*resampled), dtype=float))
            except EstimationError:
                raise
            except Exception as e:
                raise EstimationError(f"statistic failed: {e}", replicate=b) from e
        return values

    chunks = parallel_map(evaluate, replicates)
    return np.array([value for chunk in chunks for value in chunk])


def bootstrap_distribution(
    s: ScoreSet,
    statistic: Callable[[ScoreSet], float],
    replicates: int,
    strategy: ResampleStrategy = RUNS_WITHIN_TASKS,
    seed: int = 0,
) -> np.ndarray:
    """
    Bootstrap sampling distribution of a statistic.

    Returns:
        Array of length ``replicates``; element b is the statistic on the
        resample drawn from substream (seed, b)
    """
    return _replicate_values([s], statistic, replicates, strategy, seed)


def jackknife_values(
    sets: Sequence[ScoreSet], statistic: Callable[..., float]
) -> np.ndarray:
    """
    Leave-one-run-out statistics across all runs of all sets.

    A run is only left out when its task keeps at least one other run, so
    single-run tasks contribute no values.
    """
    values = []
    for position, s in enumerate(sets):
        for m in range(s.num_tasks):
            count = int(s.run_counts[m])
            if count < 2:
                continue
            for j in range(count):
                index = int(s.offsets[m]) + j
                offsets = s.offsets.copy()
                offsets[m + 1 :] -= 1
                reduced = ScoreSet(
                    s.algorithm_id, s.tasks, np.delete(s.values, index), offsets
                )
                args = list(sets)
                args[position] = reduced
                values.append(float(statistic(*args)))
    return np.asarray(values)


def acceleration(jackknife: np.ndarray) -> float:
    """BCa acceleration from jackknife values; 0 when they do not vary."""
    if jackknife.size == 0:
        return 0.0
    deviations = np.mean(jackknife) - jackknife
    denominator = 6.0 * np.sum(deviations**2) ** 1.5
    if denominator == 0:
        return 0.0
    return float(np.sum(deviations**3) / denominator)


def bias_correction(distribution: np.ndarray, point: float) -> float:
    """
    z0 = inverse normal CDF of the fraction of replicates below the point,
    clamped away from 0 and 1 by one replicate.
    """
    replicates = distribution.size
    fraction = np.mean(distribution < point)
    fraction = min(max(fraction, 1 / (replicates + 1)), replicates / (replicates + 1))
    return float(norm.ppf(fraction))


def _adjusted_levels(z0: float, a: float, levels: tuple[float, float]) -> tuple[float, float]:
    if z0 == 0.0 and a == 0.0:
        return levels
    adjusted = []
    for level in levels:
        w = z0 + norm.ppf(level)
        denominator = 1 - a * w
        if denominator <= 0:
            adjusted.append(0.0 if w < 0 else 1.0)
        else:
            adjusted.append(float(norm.cdf(z0 + w / denominator)))
    return adjusted[0], adjusted[1]


def interval_from_distribution(
    point: float,
    distribution,
    method: CiMethod = CiMethod.PERCENTILE,
    nominal_coverage: float = 0.95,
    jackknife: np.ndarray | None = None,
    seed: int = 0,
) -> IntervalEstimate:
    """
    Turn a bootstrap distribution into a confidence interval.

    percentile: [(1-c)/2, 1-(1-c)/2] quantiles of the distribution.
    basic: (2*point - q_hi, 2*point - q_lo).
    bc: percentile at levels shifted by the bias correction z0.
    bca: bc with the jackknife acceleration on top.

    Args:
        point: Statistic on the original data
        distribution: Bootstrap replicates of the statistic
        method: Interval construction
        nominal_coverage: Requested coverage c in (0, 1)
        jackknife: Leave-one-out values, required for bca
        seed: Recorded on the estimate

    Returns:
        IntervalEstimate with lower <= upper
    """
    if not 0 < nominal_coverage < 1:
        raise ValueError("nominal_coverage must lie in (0, 1)")
    distribution = np.asarray(distribution, dtype=float)
    tail = (1 - nominal_coverage) / 2
    levels = (tail, 1 - tail)

    if method == CiMethod.PERCENTILE:
        lower, upper = (quantile(distribution, q) for q in levels)
    elif method == CiMethod.BASIC:
        q_lo, q_hi = (quantile(distribution, q) for q in levels)
        lower, upper = 2 * point - q_hi, 2 * point - q_lo
    elif method in (CiMethod.BC, CiMethod.BCA):
        z0 = bias_correction(distribution, point)
        a = 0.0
        if method == CiMethod.BCA:
            if jackknife is None:
                raise ValueError("bca needs jackknife values")
            a = acceleration(np.asarray(jackknife, dtype=float))
        lower, upper = (
            quantile(distribution, q) for q in _adjusted_levels(z0, a, levels)
        )
    else:
        raise ValueError(f"Unknown CI method {method!r}")

    if lower > upper:
        lower, upper = upper, lower
    return IntervalEstimate(
        point=float(point),
        lower=float(lower),
        upper=float(upper),
        method=method,
        nominal_coverage=nominal_coverage,
        replicates=int(distribution.size),
        seed=seed,
    )


def _check_replicates(replicates: int) -> None:
    if replicates < MIN_REPLICATES:
        raise ValueError(f"confidence intervals need at least {MIN_REPLICATES} replicates")


def confidence_interval(
    s: ScoreSet,
    statistic: Callable[[ScoreSet], float],
    method: CiMethod = CiMethod.PERCENTILE,
    nominal_coverage: float = 0.95,
    replicates: int = 50000,
    strategy: ResampleStrategy = RUNS_WITHIN_TASKS,
    seed: int = 0,
) -> IntervalEstimate:
    """
    Stratified bootstrap confidence interval of a statistic of one score set.
    """
    _check_replicates(replicates)
    point = statistic(s)
    distribution = bootstrap_distribution(s, statistic, replicates, strategy, seed)
    jackknife = jackknife_values([s], statistic) if method == CiMethod.BCA else None
    return interval_from_distribution(
        point, distribution, method, nominal_coverage, jackknife, seed
    )


def paired_confidence_interval(
    x: ScoreSet,
    y: ScoreSet,
    statistic: Callable[[ScoreSet, ScoreSet], float],
    method: CiMethod = CiMethod.PERCENTILE,
    nominal_coverage: float = 0.95,
    replicates: int = 2000,
    strategy: ResampleStrategy = RUNS_WITHIN_TASKS,
    seed: int = 0,
) -> IntervalEstimate:
    """
    Confidence interval of a two-set statistic; each replicate resamples
    x and y independently, stratified within each.
    """
    _check_replicates(replicates)
    point = statistic(x, y)
    distribution = _replicate_values([x, y], statistic, replicates, strategy, seed)
    jackknife = jackknife_values([x, y], statistic) if method == CiMethod.BCA else None
    return interval_from_distribution(
        point, distribution, method, nominal_coverage, jackknife, seed
    )


def metric_curve(
    checkpoints: Sequence[tuple[str, ScoreSet]],
    statistic: Callable[[ScoreSet], float],
    method: CiMethod = CiMethod.PERCENTILE,
    nominal_coverage: float = 0.95,
    replicates: int = 2000,
    strategy: ResampleStrategy = RUNS_WITHIN_TASKS,
    seed: int = 0,
) -> list[tuple[str, IntervalEstimate]]:
    """
    Sample-efficiency curve: an aggregate metric with a pointwise interval
    at every training checkpoint.

    Args:
        checkpoints: Ordered (label, scores at that checkpoint) pairs

    Returns:
        (label, IntervalEstimate) per checkpoint, in input order
    """
    curve = []
    for i, (label, scores) in enumerate(checkpoints):
        checkpoint_seed = derive_seed(substream(seed, i, Namespace.CHECKPOINTS))
        estimate = confidence_interval(
            scores, statistic, method, nominal_coverage, replicates, strategy, checkpoint_seed
        )
        logger.debug_algorithm(
            scores.algorithm_id,
            message=f"Checkpoint {label}: {estimate.point:.4f} [{estimate.lower:.4f}, {estimate.upper:.4f}]",
        )
        curve.append((label, estimate))
    return curve
