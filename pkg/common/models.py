"""
Data models
"""

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
from cachetools import LRUCache

from common.exceptions import (
    ConfigError,
    NormalizationError,
    ScoreDataError,
)


def _frozen_array(values: Any, dtype=float) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ScoreSet:
    """
    An algorithm's scores organized as tasks x runs.

    Runs are stored as one flat array in task order; ``offsets[m]`` and
    ``offsets[m + 1]`` delimit the runs of task ``m``. Run counts may differ
    between tasks. Instances are immutable and safe to share across threads.

    Attributes:
        algorithm_id: Algorithm identifier
        tasks: Ordered task names, unique
        values: Flat array of every run score, task order then run order
        offsets: Task boundaries into ``values`` (length M + 1)
    """

    algorithm_id: str
    tasks: tuple[str, ...]
    values: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(self.tasks))
        object.__setattr__(self, "values", _frozen_array(self.values))
        object.__setattr__(self, "offsets", _frozen_array(self.offsets, dtype=np.int64))

        if not self.tasks:
            raise ScoreDataError(f"Score set for {self.algorithm_id!r} has no tasks")
        if len(set(self.tasks)) != len(self.tasks):
            raise ScoreDataError(
                f"Duplicate task names in score set for {self.algorithm_id!r}"
            )
        if self.offsets.shape != (len(self.tasks) + 1,) or self.offsets[0] != 0:
            raise ScoreDataError("Task offsets do not match the task list")
        if self.offsets[-1] != self.values.size:
            raise ScoreDataError("Task offsets do not cover the run values")
        counts = np.diff(self.offsets)
        if np.any(counts < 1):
            empty = self.tasks[int(np.argmin(counts))]
            raise ScoreDataError(
                f"Task {empty!r} of {self.algorithm_id!r} has no runs",
                location=f'key "scores.{empty}"',
            )
        if not np.all(np.isfinite(self.values)):
            raise ScoreDataError(
                f"Score set for {self.algorithm_id!r} contains NaN or infinite scores"
            )

    @classmethod
    def from_runs(
        cls,
        algorithm_id: str,
        runs: Mapping[str, Sequence[float]] | Sequence[tuple[str, Sequence[float]]],
    ) -> "ScoreSet":
        """
        Build a score set from per-task run lists.

        Args:
            algorithm_id: Algorithm identifier
            runs: Ordered mapping (or pairs) of task name to run scores

        Returns:
            ScoreSet with tasks in the given order
        """
        items = list(runs.items()) if isinstance(runs, Mapping) else list(runs)
        tasks = [task for task, _ in items]
        arrays = [np.asarray(scores, dtype=float).ravel() for _, scores in items]
        offsets = np.concatenate([[0], np.cumsum([a.size for a in arrays])])
        values = np.concatenate(arrays) if arrays else np.empty(0)
        return cls(algorithm_id, tuple(tasks), values, offsets)

    @classmethod
    def from_arrays(
        cls, algorithm_id: str, tasks: Sequence[str], arrays: Sequence[np.ndarray]
    ) -> "ScoreSet":
        """Build a score set from task names and a parallel list of run arrays."""
        return cls.from_runs(algorithm_id, list(zip(tasks, arrays, strict=True)))

    @property
    def num_tasks(self) -> int:
        return len(self.tasks)

    @property
    def run_counts(self) -> np.ndarray:
        return np.diff(self.offsets)

    @property
    def total_runs(self) -> int:
        return int(self.values.size)

    def runs(self, task: str | int) -> np.ndarray:
        """Return the run scores of one task, by name or position."""
        index = self.tasks.index(task) if isinstance(task, str) else task
        return self.values[self.offsets[index] : self.offsets[index + 1]]

    def task_runs(self) -> list[np.ndarray]:
        """Return the run arrays of every task in task order."""
        return [
            self.values[start:stop]
            for start, stop in zip(self.offsets[:-1], self.offsets[1:])
        ]

    def with_values(self, values: np.ndarray, algorithm_id: str | None = None):
        """Return a score set with the same structure and new run values."""
        return ScoreSet(
            algorithm_id or self.algorithm_id, self.tasks, values, self.offsets
        )

    def to_dict(self) -> dict[str, list[float]]:
        return {
            task: [float(v) for v in runs]
            for task, runs in zip(self.tasks, self.task_runs())
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScoreSet):
            return NotImplemented
        return (
            self.algorithm_id == other.algorithm_id
            and self.tasks == other.tasks
            and np.array_equal(self.offsets, other.offsets)
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self) -> int:
        return hash((self.algorithm_id, self.tasks, self.values.tobytes()))

    def __str__(self) -> str:
        return (
            f"ScoreSet({self.algorithm_id}, tasks={self.num_tasks}, "
            f"runs={self.total_runs})"
        )


@dataclass(frozen=True)
class NormalizationSpec:
    """
    Per-task reference points: ``low`` maps to 0 and ``high`` maps to 1.

    Attributes:
        bounds: Task name to (low, high)
    """

    bounds: Mapping[str, tuple[float, float]]

    def __post_init__(self):
        clean = {}
        for task, pair in self.bounds.items():
            low, high = float(pair[0]), float(pair[1])
            if not (math.isfinite(low) and math.isfinite(high)):
                raise NormalizationError(
                    f"Reference points of task {task!r} must be finite",
                    location=f'key "{task}"',
                )
            if high == low:
                raise NormalizationError(
                    f"Reference points of task {task!r} are equal ({low})",
                    location=f'key "{task}"',
                )
            clean[task] = (low, high)
        object.__setattr__(self, "bounds", clean)

    def for_task(self, task: str) -> tuple[float, float]:
        if task not in self.bounds:
            raise NormalizationError(f"No reference points for task {task!r}")
        return self.bounds[task]

    def to_dict(self) -> dict[str, dict[str, float]]:
        return {t: {"low": lo, "high": hi} for t, (lo, hi) in self.bounds.items()}


class MetricKind(Enum):
    """Aggregate metric kinds"""

    MEAN = "mean"
    MEDIAN = "median"
    IQM = "iqm"
    OPTIMALITY_GAP = "optimality_gap"
    DIFFICULTY_PROGRESS = "difficulty_progress"
    SUPERHUMAN_PROB = "superhuman_prob"


@dataclass(frozen=True)
class MetricSpec:
    """
    Aggregate metric selection with its parameters.

    Attributes:
        kind: Which aggregate to compute
        trim_fraction: Fraction trimmed from each end (IQM) or kept from the
            bottom (difficulty progress)
        gamma: Target score for optimality gap, threshold for superhuman probability
    """

    kind: MetricKind
    trim_fraction: float = 0.25
    gamma: float = 1.0

    def __post_init__(self):
        if self.kind == MetricKind.DIFFICULTY_PROGRESS:
            if not 0 < self.trim_fraction <= 1:
                raise ValueError("difficulty progress fraction must lie in (0, 1]")
        elif not 0 <= self.trim_fraction < 0.5:
            raise ValueError("trim_fraction must lie in [0, 0.5)")
        if not math.isfinite(self.gamma):
            raise ValueError("gamma must be finite")

    @property
    def name(self) -> str:
        return self.kind.value


class CiMethod(Enum):
    """Bootstrap confidence interval constructions"""

    PERCENTILE = "percentile"
    BASIC = "basic"  # reverse percentile
    BC = "bc"
    BCA = "bca"


class ResampleKind(Enum):
    """Stratified resampling schemes"""

    RUNS_WITHIN_TASKS = "runs"
    TASKS_AND_RUNS = "tasks-and-runs"


@dataclass(frozen=True)
class ResampleStrategy:
    """
    How a bootstrap replicate is drawn from a score set.

    Attributes:
        kind: Resample runs within each task, or tasks first and then runs
        subsample_size: Runs drawn per task for the m-out-of-n bootstrap;
            None draws each task's full run count
    """

    kind: ResampleKind = ResampleKind.RUNS_WITHIN_TASKS
    subsample_size: int | None = None

    @classmethod
    def m_out_of_n(cls, scores: ScoreSet, size: int | None = None) -> "ResampleStrategy":
        """m/n bootstrap; without an explicit size, half the smallest run count."""
        if size is None:
            size = math.ceil(int(scores.run_counts.min()) / 2)
        return cls(ResampleKind.RUNS_WITHIN_TASKS, size)

    def validate(self, scores: ScoreSet) -> None:
        if self.subsample_size is None:
            return
        smallest = int(scores.run_counts.min())
        if not 1 <= self.subsample_size <= smallest:
            raise ScoreDataError(
                f"Subsample size {self.subsample_size} must lie in [1, {smallest}] "
                f"for {scores.algorithm_id!r}"
            )


RUNS_WITHIN_TASKS = ResampleStrategy()


@dataclass(frozen=True)
class IntervalEstimate:
    """
    A point estimate with its bootstrap confidence interval.

    Attributes:
        point: Statistic on the original data
        lower: Lower bound
        upper: Upper bound
        method: Interval construction
        nominal_coverage: Requested coverage in (0, 1)
        replicates: Bootstrap replicate count
        seed: Seed the replicates were drawn with
    """

    point: float
    lower: float
    upper: float
    method: CiMethod = CiMethod.PERCENTILE
    nominal_coverage: float = 0.95
    replicates: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"lower {self.lower} exceeds upper {self.upper}")
        if not 0 < self.nominal_coverage < 1:
            raise ValueError("nominal_coverage must lie in (0, 1)")
        if self.replicates < 1:
            raise ValueError("replicates must be positive")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper

    def to_dict(self) -> dict[str, Any]:
        return {
            "point": float(self.point),
            "lower": float(self.lower),
            "upper": float(self.upper),
            "method": self.method.value,
            "nominal_coverage": float(self.nominal_coverage),
            "replicates": int(self.replicates),
            "seed": int(self.seed),
        }


class ProfileKind(Enum):
    """Which scores a performance profile is built from"""

    RUN_SCORES = "run_scores"
    TASK_MEANS = "task_means"


@dataclass(frozen=True, eq=False)
class ProfileCurve:
    """
    Performance profile: fraction of scores strictly above each threshold.

    Attributes:
        taus: Strictly ascending thresholds
        values: Tail fraction at each threshold
        kind: Run-score or average-score profile
        algorithm_id: Algorithm the curve belongs to
        lower: Optional pointwise lower band
        upper: Optional pointwise upper band
    """

    taus: np.ndarray
    values: np.ndarray
    kind: ProfileKind = ProfileKind.RUN_SCORES
    algorithm_id: str = ""
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "taus", _frozen_array(self.taus))
        object.__setattr__(self, "values", _frozen_array(self.values))
        if self.taus.ndim != 1 or self.taus.size == 0:
            raise ValueError("profile grid must be a non-empty vector")
        if self.values.shape != self.taus.shape:
            raise ValueError("profile values must match the grid")
        if np.any(np.diff(self.taus) <= 0):
            raise ValueError("profile grid must be strictly ascending")
        if np.any(self.values < 0) or np.any(self.values > 1):
            raise ValueError("profile values must lie in [0, 1]")
        if np.any(np.diff(self.values) > 1e-12):
            raise ValueError("profile values must be non-increasing")
        if (self.lower is None) != (self.upper is None):
            raise ValueError("bands need both lower and upper")
        if self.lower is not None:
            object.__setattr__(self, "lower", _frozen_array(self.lower))
            object.__setattr__(self, "upper", _frozen_array(self.upper))
            if np.any(self.lower > self.values) or np.any(self.values > self.upper):
                raise ValueError("bands must contain the profile values")
            if np.any(self.lower < 0) or np.any(self.upper > 1):
                raise ValueError("bands must lie in [0, 1]")

    @property
    def has_bands(self) -> bool:
        return self.lower is not None

    def with_bands(self, lower: np.ndarray, upper: np.ndarray) -> "ProfileCurve":
        return ProfileCurve(
            self.taus, self.values, self.kind, self.algorithm_id, lower, upper
        )

    def to_records(self) -> list[dict[str, float]]:
        """Ordered (tau, value[, lower, upper]) records for export."""
        records = []
        for i, tau in enumerate(self.taus):
            record = {"tau": float(tau), "value": float(self.values[i])}
            if self.has_bands:
                record["lower"] = float(self.lower[i])
                record["upper"] = float(self.upper[i])
            records.append(record)
        return records


@dataclass(frozen=True, eq=False)
class RankDistribution:
    """
    Bootstrap probability of each algorithm receiving each rank.

    Attributes:
        algorithms: Algorithm ids, row order of every matrix
        per_task: Task name to A x A matrix; entry (i, r) is the probability
            that algorithm i receives rank r + 1
        mean_matrix: Average of the per-task matrices
        replicates: Bootstrap replicate count
        seed: Seed the replicates were drawn with
    """

    algorithms: tuple[str, ...]
    per_task: Mapping[str, np.ndarray]
    mean_matrix: np.ndarray
    replicates: int = 1
    seed: int = 0

    def __post_init__(self):
        size = len(self.algorithms)
        for task, matrix in {**self.per_task, "<mean>": self.mean_matrix}.items():
            if matrix.shape != (size, size):
                raise ValueError(f"rank matrix for {task!r} has the wrong shape")
            if not (
                np.allclose(matrix.sum(axis=0), 1.0, atol=1e-6)
                and np.allclose(matrix.sum(axis=1), 1.0, atol=1e-6)
            ):
                raise ValueError(f"rank matrix for {task!r} is not doubly stochastic")


class FamilyKind(Enum):
    """Synthetic score distribution families"""

    GAUSSIAN = "gaussian"
    LOGNORMAL = "lognormal"
    MIXTURE = "mixture"
    UNIFORM = "uniform"


_FAMILY_PARAMS = {
    FamilyKind.GAUSSIAN: {"mu": 0.0, "sigma": 1.0},
    FamilyKind.LOGNORMAL: {"mu": 0.0, "sigma": 1.0},
    # two gaussian components; weight is the probability of the second
    FamilyKind.MIXTURE: {
        "mu1": 0.0,
        "sigma1": 1.0,
        "mu2": 5.0,
        "sigma2": 1.0,
        "weight": 0.1,
    },
    FamilyKind.UNIFORM: {"low": 0.0, "high": 1.0},
}


@dataclass(frozen=True)
class FamilySpec:
    """
    A per-task score distribution for synthetic pools.

    Attributes:
        kind: Distribution family
        params: Family parameters; missing ones take family defaults
    """

    kind: FamilyKind
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        defaults = _FAMILY_PARAMS[self.kind]
        unknown = set(self.params) - set(defaults)
        if unknown:
            raise ConfigError(
                f"Unknown parameters for {self.kind.value}: {sorted(unknown)}",
                key=f"family.{sorted(unknown)[0]}",
            )
        merged = {k: float(self.params.get(k, v)) for k, v in defaults.items()}
        object.__setattr__(self, "params", merged)

        p = merged
        sigmas = [v for k, v in p.items() if k.startswith("sigma")]
        if any(s < 0 for s in sigmas):
            raise ConfigError("Standard deviations must be >= 0", key="family.sigma")
        if self.kind == FamilyKind.MIXTURE and not 0 <= p["weight"] <= 1:
            raise ConfigError("Mixture weight must lie in [0, 1]", key="family.weight")
        if self.kind == FamilyKind.UNIFORM and p["high"] < p["low"]:
            raise ConfigError("Uniform high must be >= low", key="family.high")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "FamilySpec":
        if "kind" not in data:
            raise ConfigError("Family needs a kind", key="family.kind")
        try:
            kind = FamilyKind(data["kind"])
        except ValueError as e:
            raise ConfigError(
                f"Unknown family {data['kind']!r}", key="family.kind"
            ) from e
        return cls(kind, {k: v for k, v in data.items() if k != "kind"})

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        p = self.params
        if self.kind == FamilyKind.GAUSSIAN:
            return p["mu"] + p["sigma"] * rng.standard_normal(size)
        if self.kind == FamilyKind.LOGNORMAL:
            return np.exp(p["mu"] + p["sigma"] * rng.standard_normal(size))
        if self.kind == FamilyKind.UNIFORM:
            return p["low"] + (p["high"] - p["low"]) * rng.random(size)
        second = rng.random(size) < p["weight"]
        noise = rng.standard_normal(size)
        return np.where(
            second, p["mu2"] + p["sigma2"] * noise, p["mu1"] + p["sigma1"] * noise
        )

    def analytic_mean(self) -> float:
        p = self.params
        if self.kind == FamilyKind.GAUSSIAN:
            return p["mu"]
        if self.kind == FamilyKind.LOGNORMAL:
            return math.exp(p["mu"] + p["sigma"] ** 2 / 2)
        if self.kind == FamilyKind.UNIFORM:
            return (p["low"] + p["high"]) / 2
        return (1 - p["weight"]) * p["mu1"] + p["weight"] * p["mu2"]


@dataclass(frozen=True)
class SyntheticPoolSpec:
    """
    Recipe for a synthetic population of runs.

    Attributes:
        num_tasks: Task count M
        pool_size: Runs per task in the pool
        families: One family for every task, or one per task
        seed: Seed for drawing the pool
    """

    num_tasks: int
    pool_size: int
    families: tuple[FamilySpec, ...]
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "families", tuple(self.families))
        if self.num_tasks < 1:
            raise ConfigError("num_tasks must be >= 1", key="num_tasks")
        if self.pool_size < 1:
            raise ConfigError("pool_size must be >= 1", key="pool_size")
        if len(self.families) not in (1, self.num_tasks):
            raise ConfigError(
                "Give one family, or one family per task", key="families"
            )

    def family(self, task_index: int) -> FamilySpec:
        if len(self.families) == 1:
            return self.families[0]
        return self.families[task_index]


@dataclass(eq=False)
class ScorePool:
    """
    A large score set treated as the population for Monte Carlo studies.

    Attributes:
        scores: The pool; each task holds its full run population
        spec: Synthetic recipe, when the pool was generated
        truth_cache: Statistic name to its value on the full pool
    """

    scores: ScoreSet
    spec: SyntheticPoolSpec | None = None
    truth_cache: LRUCache = field(default_factory=lambda: LRUCache(maxsize=64))

    @property
    def min_pool_size(self) -> int:
        return int(self.scores.run_counts.min())

    def truth(self, name: str, statistic) -> float:
        """Statistic on the full pool, computed once per name."""
        if name not in self.truth_cache:
            self.truth_cache[name] = float(statistic(self.scores))
        return self.truth_cache[name]

    def analytic_truth(self, name: str) -> float | None:
        """
        Closed-form value of mean/median of task means for synthetic pools,
        when every task family has one.
        """
        if self.spec is None:
            return None
        task_values = []
        for m in range(self.scores.num_tasks):
            family = self.spec.family(m)
            # task means concentrate on the family mean
            task_values.append(family.analytic_mean())
        if name == MetricKind.MEAN.value:
            return float(np.mean(task_values))
        if name == MetricKind.MEDIAN.value:
            return float(np.median(task_values))
        return None


@dataclass(frozen=True)
class EvalSeries:
    """
    Evaluation scores recorded during training.

    Attributes:
        algorithm_id: Algorithm identifier
        tasks: Ordered task names
        series: Per task, per run, the ordered evaluation scores
    """

    algorithm_id: str
    tasks: tuple[str, ...]
    series: tuple[tuple[np.ndarray, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(self.tasks))
        object.__setattr__(
            self,
            "series",
            tuple(tuple(_frozen_array(r) for r in runs) for runs in self.series),
        )
        if len(self.series) != len(self.tasks):
            raise ScoreDataError("Evaluation series must cover every task")
        for task, runs in zip(self.tasks, self.series):
            if not runs:
                raise ScoreDataError(f"Task {task!r} has no runs")
            if any(r.size == 0 for r in runs):
                raise ScoreDataError(f"Task {task!r} has an empty evaluation series")


@dataclass(frozen=True)
class EvalSeriesSpec:
    """
    Recipe for synthetic evaluation series: every run settles on a plateau
    drawn from ``plateau`` and each evaluation adds gaussian noise on top.

    Attributes:
        num_tasks: Task count M
        runs: Runs per task
        evals: Evaluations recorded per run
        plateau: Family the per-run plateau is drawn from
        noise_sd: Standard deviation of evaluation noise
        seed: Seed for drawing the series
    """

    num_tasks: int
    runs: int
    evals: int
    plateau: FamilySpec
    noise_sd: float = 0.1
    seed: int = 0

    def __post_init__(self):
        for key in ("num_tasks", "runs", "evals"):
            if getattr(self, key) < 1:
                raise ConfigError(f"{key} must be >= 1", key=key)
        if self.noise_sd < 0:
            raise ConfigError("noise_sd must be >= 0", key="noise_sd")


class ProtocolKind(Enum):
    """Ways of turning evaluation series into one score per run"""

    FINAL = "final"
    MAX_OVER_EVALS = "max_over_evals"
    MAX_OVER_CONFIGS = "max_over_configs"


class ExperimentStatus(Enum):
    """
    Status of a harness experiment
    """

    PASS = "PASS"
    FAIL = "FAIL"
    ERROR = "ERROR"


@dataclass
class ExperimentReport:
    """
    Result of a harness experiment

    Attributes:
        name: Experiment name from the config
        kind: Experiment kind
        status: PASS when every check holds
        summary: Headline scalars (coverage, mean width, ...)
        rows: Table rows, one dict per row
        checks: Named boolean checks behind the status
        seed: Seed the experiment ran with
        error_message: Failure reason for ERROR results
    """

    name: str
    kind: str
    status: ExperimentStatus
    summary: dict[str, Any] = field(default_factory=dict)
    rows: list[dict[str, Any]] = field(default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)
    seed: int = 0
    error_message: str | None = None

    @classmethod
    def from_checks(
        cls,
        name: str,
        kind: str,
        summary: dict[str, Any],
        rows: list[dict[str, Any]],
        checks: dict[str, bool],
        seed: int,
    ) -> "ExperimentReport":
        """
        Create a report whose status follows its checks

        Returns:
            ExperimentReport with PASS status if every check holds, FAIL otherwise
        """
        status = (
            ExperimentStatus.PASS if all(checks.values()) else ExperimentStatus.FAIL
        )
        return cls(name, kind, status, summary, rows, checks, seed)

    @classmethod
    def from_error(
        cls, name: str, kind: str, error: Exception, seed: int = 0
    ) -> "ExperimentReport":
        """
        Create an error report

        Returns:
            ExperimentReport with ERROR status
        """
        return cls(
            name, kind, ExperimentStatus.ERROR, seed=seed, error_message=str(error)
        )

    @property
    def is_pass(self) -> bool:
        return self.status == ExperimentStatus.PASS

    @property
    def is_error(self) -> bool:
        return self.status == ExperimentStatus.ERROR

    def to_dict(self) -> dict[str, Any]:
        data = {
            "name": self.name,
            "kind": self.kind,
            "status": self.status.value,
            "seed": self.seed,
            "summary": self.summary,
            "checks": self.checks,
            "rows": self.rows,
        }
        if self.error_message:
            data["error"] = self.error_message
        return data

    def __str__(self) -> str:
        if self.is_error:
            return f"ExperimentReport({self.name}, ERROR, message='{self.error_message}')"
        return f"ExperimentReport({self.name}, {self.status.value})"


@dataclass
class PlotArtifact:
    """
    An SVG plot with the CSV of the series it draws

    Attributes:
        name: Base file name without extension
        svg: SVG document text
        csv: CSV text of the plotted series
    """

    name: str
    svg: str
    csv: str


@dataclass
class ReportDocument:
    """
    Self-describing report of one CLI invocation

    Attributes:
        command: Subcommand that produced the report
        inputs: Input files with their sha256 digests
        settings: Seed, replicate counts, methods and other knobs used
        metrics: Algorithm id to metric name to interval estimate dict
        comparisons: Pairwise probability-of-improvement records
        profiles: Profile curves and derived readouts
        ranks: Rank distribution matrices
    """

    command: str
    inputs: list[dict[str, str]] = field(default_factory=list)
    settings: dict[str, Any] = field(default_factory=dict)
    metrics: dict[str, dict[str, dict[str, Any]]] = field(default_factory=dict)
    comparisons: list[dict[str, Any]] = field(default_factory=list)
    profiles: dict[str, Any] = field(default_factory=dict)
    ranks: dict[str, Any] = field(default_factory=dict)
    experiments: list[dict[str, Any]] = field(default_factory=list)
