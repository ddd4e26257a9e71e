"""
Monte Carlo harness for validating the estimators themselves.

Pools of runs stand in for the population: experiments repeatedly subsample
a pool, apply an estimator and compare against the statistic on the full
pool. Trial ``t`` draws from substream (seed, t) of the trials namespace, so
every experiment is a pure function of its inputs and seed.
"""

import traceback
from collections.abc import Callable, Mapping, Sequence
from functools import partial
from pathlib import Path
from typing import Any

import numpy as np
from yaml import YAMLError, safe_load

from common import config
from common.exceptions import ConfigError, ScoreDataError
from common.logger import get_logger
from common.models import (
    CiMethod,
    EvalSeries,
    EvalSeriesSpec,
    ExperimentReport,
    FamilySpec,
    IntervalEstimate,
    ProtocolKind,
    ResampleStrategy,
    ScorePool,
    ScoreSet,
    SyntheticPoolSpec,
)
from core.aggregates import iqm, parse_metric_kind, statistic_by_name
from core.bootstrap import (
    confidence_interval,
    paired_confidence_interval,
    stratified_resample,
)
from core.executor import parallel_map
from core.rng import Namespace, derive_seed, substream
from core.score_data import detect_format, load_scores

logger = get_logger(__name__)

Statistic = Callable[[ScoreSet], float]

SYNTHETIC_ALGORITHM = "synthetic"

EXPERIMENT_KINDS = ("sampling_distribution", "bias", "coverage", "lift", "mse", "protocol")

REQUIRED_KEYS = {
    "sampling_distribution": ("pool", "n", "trials"),
    "bias": ("pool", "ns", "trials"),
    "coverage": ("pool", "k", "trials"),
    "lift": ("pool", "n", "lifts", "trials"),
    "mse": ("pool", "trim_fractions", "trials"),
    "protocol": ("series", "trials"),
}


def _task_names(count: int) -> tuple[str, ...]:
    width = len(str(count - 1))
    return tuple(f"task_{m:0{width}d}" for m in range(count))


def statistic_key(statistic: Statistic) -> str:
    """Stable name of a statistic for the pool truth cache."""
    if isinstance(statistic, partial):
        args = ", ".join(f"{k}={v}" for k, v in sorted(statistic.keywords.items()))
        return f"{statistic_key(statistic.func)}({args})"
    name = getattr(statistic, "__name__", "<lambda>")
    # anonymous functions are only told apart by identity
    return repr(statistic) if name == "<lambda>" else name


def generate_pool(spec: SyntheticPoolSpec) -> ScorePool:
    """
    Draw a synthetic pool: ``pool_size`` i.i.d. runs per task from the
    task's family. Task m draws from substream (seed, m).
    """
    tasks = _task_names(spec.num_tasks)
    arrays = [
        spec.family(m).sample(substream(spec.seed, m, Namespace.SYNTHETIC_POOL), spec.pool_size)
        for m in range(spec.num_tasks)
    ]
    scores = ScoreSet.from_arrays(SYNTHETIC_ALGORITHM, tasks, arrays)
    return ScorePool(scores, spec)


def _draw_with_replacement(scores: ScoreSet, n: int, rng: np.random.Generator) -> ScoreSet:
    return stratified_resample(scores, ResampleStrategy(subsample_size=n), rng)


def _draw_without_replacement(scores: ScoreSet, k: int, rng: np.random.Generator) -> ScoreSet:
    indices = np.concatenate(
        [
            start + rng.choice(count, size=k, replace=False)
            for start, count in zip(scores.offsets[:-1], scores.run_counts)
        ]
    )
    offsets = np.arange(scores.num_tasks + 1) * k
    return ScoreSet(scores.algorithm_id, scores.tasks, scores.values[indices], offsets)


def _check_size(pool: ScorePool, size: int, name: str) -> None:
    if not 1 <= size <= pool.min_pool_size:
        raise ValueError(
            f"{name}={size} must lie in [1, {pool.min_pool_size}] for this pool"
        )


def _run_trials(evaluate: Callable[[int, np.random.Generator], Any], trials: int, seed: int) -> list:
    if trials < 1:
        raise ValueError("trials must be >= 1")

    def chunk(start: int, stop: int) -> list:
        return [
            evaluate(t, substream(seed, t, Namespace.HARNESS_TRIALS))
            for t in range(start, stop)
        ]

    return [value for part in parallel_map(chunk, trials) for value in part]


def sampling_distribution(
    pool: ScorePool, n: int, trials: int, statistic: Statistic, seed: int = 0
) -> np.ndarray:
    """
    Statistic on ``trials`` subsamples of n runs per task, drawn uniformly
    with replacement from the pool.
    """
    _check_size(pool, n, "n")
    values = _run_trials(
        lambda t, rng: statistic(_draw_with_replacement(pool.scores, n, rng)), trials, seed
    )
    return np.asarray(values, dtype=float)


def expected_statistic_curve(
    pool: ScorePool,
    ns: Sequence[int],
    trials: int,
    statistic: Statistic,
    seed: int = 0,
) -> list[tuple[int, float, float]]:
    """
    Monte Carlo expectation of a statistic as a function of the run count.

    Returns:
        (n, expected value, Monte Carlo standard error) per n
    """
    curve = []
    for n in ns:
        values = sampling_distribution(pool, n, trials, statistic, seed)
        se = float(np.std(values, ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0
        curve.append((int(n), float(np.mean(values)), se))
    return curve


def coverage_experiment(
    pool: ScorePool,
    k: int,
    trials: int = 10000,
    method: CiMethod = CiMethod.PERCENTILE,
    statistic: Statistic = iqm,
    nominal: float = 0.95,
    replicates: int = 1000,
    seed: int = 0,
) -> tuple[float, float]:
    """
    Empirical coverage of bootstrap CIs built from k runs per task.

    Each trial draws k runs per task without replacement, builds the CI and
    checks whether it contains the statistic of the full pool.

    Returns:
        (coverage in percent, mean CI width)
    """
    _check_size(pool, k, "k")
    truth = pool.truth(statistic_key(statistic), statistic)

    def evaluate(t: int, rng: np.random.Generator) -> tuple[bool, float]:
        sample = _draw_without_replacement(pool.scores, k, rng)
        estimate = confidence_interval(
            sample, statistic, method, nominal, replicates, seed=derive_seed(rng)
        )
        return estimate.contains(truth), estimate.width

    results = _run_trials(evaluate, trials, seed)
    hits = sum(contained for contained, _ in results)
    mean_width = float(np.mean([width for _, width in results]))
    return 100.0 * hits / trials, mean_width


def observed_lift(base: float, lifted: float) -> float:
    """Relative change when the base is positive, else the absolute difference."""
    if base > 0:
        return (lifted - base) / base
    return lifted - base


def lift_detection(
    pool: ScorePool,
    lift_percent: float,
    n: int,
    trials: int,
    statistic: Statistic = iqm,
    nominal: float = 0.95,
    replicates: int = 1000,
    method: CiMethod = CiMethod.PERCENTILE,
    seed: int = 0,
) -> list[IntervalEstimate]:
    """
    CIs for the lift between two independent n-run subsamples of a pool,
    the second one inflated by (1 + lift_percent / 100).

    Whether the lift is relative or absolute is fixed per trial by the sign
    of the statistic on the base subsample.
    """
    if lift_percent < 0:
        raise ValueError("lift_percent must be >= 0")
    _check_size(pool, n, "n")
    factor = 1.0 + lift_percent / 100.0

    def evaluate(t: int, rng: np.random.Generator) -> IntervalEstimate:
        base = _draw_with_replacement(pool.scores, n, rng)
        other = _draw_with_replacement(pool.scores, n, rng)
        lifted = other.with_values(other.values * factor, algorithm_id="lifted")
        relative = statistic(base) > 0

        def lift(x: ScoreSet, y: ScoreSet) -> float:
            bx, by = statistic(x), statistic(y)
            # relative/absolute choice stays fixed across replicates
            return observed_lift(bx, by) if relative else by - bx

        return paired_confidence_interval(
            base, lifted, lift, method, nominal, replicates, seed=derive_seed(rng)
        )

    return _run_trials(evaluate, trials, seed)


def estimator_mse(
    pool: ScorePool,
    n: int = 10,
    trials: int = 20000,
    trim_fractions: Sequence[float] = (0.0, 0.1, 0.25, 0.4),
    seed: int = 0,
) -> list[tuple[float, float]]:
    """
    Mean squared error of trimmed means with n runs per task, each trim
    measured against its own value on the full pool.
    """
    _check_size(pool, n, "n")
    trims = [float(f) for f in trim_fractions]
    truths = np.array([iqm(pool.scores, f) for f in trims])

    def evaluate(t: int, rng: np.random.Generator) -> np.ndarray:
        sample = _draw_with_replacement(pool.scores, n, rng)
        return np.array([iqm(sample, f) for f in trims])

    estimates = np.array(_run_trials(evaluate, trials, seed))
    mse = np.mean((estimates - truths) ** 2, axis=0)
    return [(f, float(e)) for f, e in zip(trims, mse)]


def protocol_scores(
    series: EvalSeries, protocol: ProtocolKind, configs: int | None = None
) -> ScoreSet:
    """
    Collapse evaluation series into one score per run.

    final keeps each run's last evaluation, max_over_evals its best one.
    max_over_configs splits a task's runs into ``configs`` consecutive equal
    groups, averages each group's final scores and keeps the best group as
    the task's single run.
    """
    arrays = []
    for task, runs in zip(series.tasks, series.series):
        finals = np.array([r[-1] for r in runs])
        if protocol == ProtocolKind.FINAL:
            arrays.append(finals)
        elif protocol == ProtocolKind.MAX_OVER_EVALS:
            arrays.append(np.array([r.max() for r in runs]))
        elif protocol == ProtocolKind.MAX_OVER_CONFIGS:
            if not configs or configs < 1 or len(runs) % configs:
                raise ScoreDataError(
                    f"{len(runs)} runs of task {task!r} cannot be split into "
                    f"{configs} equal configurations"
                )
            arrays.append(np.array([finals.reshape(configs, -1).mean(axis=1).max()]))
        else:
            raise ValueError(f"Unknown protocol {protocol!r}")
    return ScoreSet.from_arrays(series.algorithm_id, series.tasks, arrays)


def generate_eval_series(spec: EvalSeriesSpec, algorithm_id: str = SYNTHETIC_ALGORITHM) -> EvalSeries:
    """Noisy plateaus; task m draws from substream (seed, m)."""
    series = []
    for m in range(spec.num_tasks):
        rng = substream(spec.seed, m, Namespace.EVAL_SERIES)
        plateaus = spec.plateau.sample(rng, spec.runs)
        noise = spec.noise_sd * rng.standard_normal((spec.runs, spec.evals))
        series.append(tuple(plateaus[:, None] + noise))
    return EvalSeries(algorithm_id, _task_names(spec.num_tasks), tuple(series))


def protocol_bias_experiment(
    spec: EvalSeriesSpec, trials: int, statistic: Statistic = iqm
) -> tuple[np.ndarray, float, float]:
    """
    Bias of reporting the best evaluation instead of the final one.

    Every trial draws fresh series and records
    statistic(max_over_evals) - statistic(final).

    Returns:
        (per-trial differences, mean difference, standard error)
    """

    def evaluate(t: int, rng: np.random.Generator) -> float:
        trial_spec = EvalSeriesSpec(
            spec.num_tasks, spec.runs, spec.evals, spec.plateau, spec.noise_sd, derive_seed(rng)
        )
        series = generate_eval_series(trial_spec)
        best = statistic(protocol_scores(series, ProtocolKind.MAX_OVER_EVALS))
        final = statistic(protocol_scores(series, ProtocolKind.FINAL))
        return best - final

    diffs = np.asarray(_run_trials(evaluate, trials, spec.seed), dtype=float)
    se = float(np.std(diffs, ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0
    return diffs, float(np.mean(diffs)), se


def load_experiment_config(source: str | Path) -> list[dict[str, Any]]:
    """
    Read an experiment config file (JSON or YAML).

    The file holds a single experiment, a list of them, or a mapping with
    an ``experiments`` list.
    """
    path = Path(source)
    try:
        with open(path, encoding="utf8") as f:
            content = safe_load(f)
    except YAMLError as e:
        raise ConfigError(f"Cannot parse experiment config {path}: {e}") from e

    if isinstance(content, Mapping) and "experiments" in content:
        content = content["experiments"]
    if isinstance(content, Mapping):
        content = [content]
    if not isinstance(content, list) or not content:
        raise ConfigError("Experiment config holds no experiments", key="experiments")
    for i, experiment in enumerate(content):
        if not isinstance(experiment, Mapping):
            raise ConfigError(f"Experiment {i} is not a mapping", key=f"experiments[{i}]")
        _check_required(experiment)
    return [dict(e) for e in content]


def _check_required(experiment: Mapping[str, Any]) -> None:
    if "kind" not in experiment:
        raise ConfigError("Experiment needs a kind", key="kind")
    kind = experiment["kind"]
    if kind not in REQUIRED_KEYS:
        raise ConfigError(
            f"Unknown experiment kind {kind!r}, expected one of {list(EXPERIMENT_KINDS)}",
            key="kind",
        )
    for key in REQUIRED_KEYS[kind]:
        if key not in experiment:
            raise ConfigError(f"Experiment of kind {kind!r} needs {key!r}", key=key)
    if kind == "mse":
        _check_trim_fractions(experiment["trim_fractions"])


def _check_trim_fractions(fractions: Any) -> None:
    if isinstance(fractions, (str, bytes)) or not isinstance(fractions, Sequence) or not fractions:
        raise ConfigError("Expected a non-empty list of trim fractions", key="trim_fractions")
    for fraction in fractions:
        if isinstance(fraction, bool) or not isinstance(fraction, (int, float)) or not 0 <= fraction < 0.5:
            raise ConfigError(
                f"Trim fractions must lie in [0, 0.5), got {fraction!r}", key="trim_fractions"
            )


def _get_int(experiment: Mapping[str, Any], key: str, default: int | None = None) -> int:
    value = experiment.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"Expected an integer >= 1, got {value!r}", key=key)
    return value


def _get_float(experiment: Mapping[str, Any], key: str, default: float) -> float:
    value = experiment.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"Expected a number, got {value!r}", key=key)
    return float(value)


def _families(data: Mapping[str, Any]) -> list[FamilySpec]:
    if "families" in data:
        return [FamilySpec.from_dict(f) for f in data["families"]]
    if "family" in data:
        return [FamilySpec.from_dict(data["family"])]
    raise ConfigError("Synthetic pool needs a family", key="pool.family")


def build_pool(pool_config: Mapping[str, Any], seed: int, base_dir: Path | None = None) -> ScorePool:
    """
    Pool from an experiment config: a synthetic recipe, or one algorithm of
    a score file (path relative to the config file).
    """
    if not isinstance(pool_config, Mapping):
        raise ConfigError("Pool must be a mapping", key="pool")
    if "file" in pool_config:
        path = Path(pool_config["file"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        with open(path, "rb") as f:
            sets = load_scores(f, detect_format(str(path)))
        algorithm = pool_config.get("algorithm") or next(iter(sets))
        if algorithm not in sets:
            raise ConfigError(f"No algorithm {algorithm!r} in {path}", key="pool.algorithm")
        return ScorePool(sets[algorithm])

    for key in ("num_tasks", "pool_size"):
        if key not in pool_config:
            raise ConfigError(f"Synthetic pool needs {key!r}", key=f"pool.{key}")
    spec = SyntheticPoolSpec(
        num_tasks=_get_int(pool_config, "num_tasks"),
        pool_size=_get_int(pool_config, "pool_size"),
        families=tuple(_families(pool_config)),
        seed=int(pool_config.get("seed", seed)),
    )
    return generate_pool(spec)


def _statistic(experiment: Mapping[str, Any]) -> tuple[str, Statistic]:
    name = experiment.get("statistic", "iqm")
    try:
        return name, statistic_by_name(
            name,
            trim_fraction=_get_float(experiment, "trim", 0.25),
            gamma=_get_float(experiment, "gamma", 1.0),
        )
    except Exception as e:
        raise ConfigError(str(e), key="statistic") from e


def _ci_method(experiment: Mapping[str, Any]) -> CiMethod:
    try:
        return CiMethod(experiment.get("method", config.ci_method))
    except ValueError as e:
        raise ConfigError(f"Unknown CI method {experiment.get('method')!r}", key="method") from e


def _analytic_value(pool: ScorePool, name: str) -> float | None:
    """Closed-form population value of the statistic, if the pool has one."""
    return pool.analytic_truth(parse_metric_kind(name).value)


def _sampling_distribution(experiment, pool, name, statistic, trials, seed):
    n = _get_int(experiment, "n")
    values = sampling_distribution(pool, n, trials, statistic, seed)
    quantiles = (0.025, 0.25, 0.5, 0.75, 0.975)
    summary = {
        "n": n,
        "mean": float(np.mean(values)),
        "std": float(np.std(values, ddof=1)) if trials > 1 else 0.0,
        "pool_value": pool.truth(statistic_key(statistic), statistic),
    }
    rows = [{"quantile": q, "value": float(np.quantile(values, q))} for q in quantiles]
    return summary, rows, {}


def _bias(experiment, pool, name, statistic, trials, seed):
    tolerance = _get_float(experiment, "tolerance_se", 4.0)
    truth = pool.truth(statistic_key(statistic), statistic)
    rows = []
    flat = True
    for n, expected, se in expected_statistic_curve(pool, experiment["ns"], trials, statistic, seed):
        bias = expected - truth
        within = abs(bias) <= tolerance * se + 1e-12
        flat = flat and within
        rows.append({"n": n, "expected": expected, "se": se, "bias": bias, "within_tolerance": within})
    summary = {"pool_value": truth, "analytic_value": _analytic_value(pool, name), "tolerance_se": tolerance}
    return summary, rows, {"unbiased_within_tolerance": flat}


def _coverage(experiment, pool, name, statistic, trials, seed):
    k = _get_int(experiment, "k")
    nominal = _get_float(experiment, "nominal", config.coverage)
    tolerance = _get_float(experiment, "tolerance", 5.0)
    method = _ci_method(experiment)
    coverage, width = coverage_experiment(
        pool,
        k,
        trials,
        method,
        statistic,
        nominal,
        _get_int(experiment, "replicates", 1000),
        seed,
    )
    summary = {
        "k": k,
        "method": method.value,
        "nominal_percent": 100 * nominal,
        "coverage_percent": coverage,
        "mean_width": width,
        "pool_value": pool.truth(statistic_key(statistic), statistic),
        "analytic_value": _analytic_value(pool, name),
    }
    return summary, [], {"coverage_near_nominal": abs(coverage - 100 * nominal) <= tolerance}


def _lift(experiment, pool, name, statistic, trials, seed):
    n = _get_int(experiment, "n")
    nominal = _get_float(experiment, "nominal", config.coverage)
    tolerance = _get_float(experiment, "tolerance", 5.0)
    min_power = _get_float(experiment, "min_power", 0.95)
    replicates = _get_int(experiment, "replicates", 1000)
    method = _ci_method(experiment)

    rows = []
    checks = {}
    for lift_percent in experiment["lifts"]:
        intervals = lift_detection(
            pool, float(lift_percent), n, trials, statistic, nominal, replicates, method, seed
        )
        contains = 100.0 * sum(ci.contains(0.0) for ci in intervals) / trials
        detected = 100.0 * sum(ci.lower > 0 for ci in intervals) / trials
        rows.append(
            {
                "lift_percent": float(lift_percent),
                "contains_zero_percent": contains,
                "detected_percent": detected,
                "mean_width": float(np.mean([ci.width for ci in intervals])),
                "mean_lift": float(np.mean([ci.point for ci in intervals])),
            }
        )
        if lift_percent == 0:
            checks["null_coverage_near_nominal"] = abs(contains - 100 * nominal) <= tolerance
        else:
            checks[f"detects_{lift_percent:g}_percent"] = detected >= 100 * min_power
    return {"n": n, "method": method.value}, rows, checks


def _mse(experiment, pool, name, statistic, trials, seed):
    n = _get_int(experiment, "n", 10)
    table = estimator_mse(pool, n, trials, experiment["trim_fractions"], seed)
    rows = [{"trim_fraction": f, "mse": e} for f, e in table]
    best = min(table, key=lambda row: row[1])[0]
    checks = {"mse_finite": all(np.isfinite(e) for _, e in table)}
    if "expected_best_trim" in experiment:
        expected = _get_float(experiment, "expected_best_trim", 0.0)
        checks["best_trim_as_expected"] = best == expected
    return {"n": n, "best_trim_fraction": best}, rows, checks


def _protocol(experiment, pool, name, statistic, trials, seed):
    series_config = experiment["series"]
    if not isinstance(series_config, Mapping):
        raise ConfigError("Series must be a mapping", key="series")
    if "plateau" not in series_config:
        raise ConfigError("Series needs a plateau family", key="series.plateau")
    spec = EvalSeriesSpec(
        num_tasks=_get_int(series_config, "num_tasks", 10),
        runs=_get_int(series_config, "runs", 5),
        evals=_get_int(series_config, "evals", 10),
        plateau=FamilySpec.from_dict(series_config["plateau"]),
        noise_sd=_get_float(series_config, "noise_sd", 0.1),
        seed=seed,
    )
    diffs, mean, se = protocol_bias_experiment(spec, trials, statistic)
    summary = {
        "mean_difference": mean,
        "se": se,
        "significant": bool(mean > 3 * se),
    }
    return summary, [], {"max_over_evals_at_least_final": bool(np.min(diffs) >= -1e-12)}


_RUNNERS = {
    "sampling_distribution": _sampling_distribution,
    "bias": _bias,
    "coverage": _coverage,
    "lift": _lift,
    "mse": _mse,
    "protocol": _protocol,
}


def run_experiment(
    experiment: Mapping[str, Any], seed: int | None = None, base_dir: Path | None = None
) -> ExperimentReport:
    """
    Run one experiment config and evaluate its pass/fail checks.

    Config problems raise ConfigError; failures while computing are turned
    into an ERROR report.

    Args:
        experiment: Experiment mapping with at least ``kind`` and its
            required keys
        seed: Seed used when the experiment does not set one
        base_dir: Directory that relative pool files are resolved against
    """
    _check_required(experiment)
    kind = experiment["kind"]
    name = str(experiment.get("name", kind))
    seed = int(experiment.get("seed", config.seed if seed is None else seed))
    trials = _get_int(experiment, "trials")
    statistic_name, statistic = _statistic(experiment)
    pool = build_pool(experiment["pool"], seed, base_dir) if "pool" in experiment else None

    logger.info(f"Running experiment {name} ({kind}, {trials} trials, seed {seed})")
    try:
        summary, rows, checks = _RUNNERS[kind](
            experiment, pool, statistic_name, statistic, trials, seed
        )
    except ConfigError:
        raise
    except Exception as e:
        logger.error(f"Experiment {name} failed: {e}")
        logger.debug(traceback.format_exc())
        return ExperimentReport.from_error(name, kind, e, seed)

    summary = {"statistic": statistic_name, "trials": trials, **summary}
    report = ExperimentReport.from_checks(name, kind, summary, rows, checks, seed)
    logger.info(f"Experiment {name}: {report.status.value}")
    return report
