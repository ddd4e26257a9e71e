"""
Unit tests for core.profiles module
"""

import itertools
import unittest

import numpy as np

from common.exceptions import TaskMismatchError
from common.models import ProfileCurve, ProfileKind, ScoreSet
from core.executor import initialize_executor, shutdown_executor
from core.profiles import (
    DOMINANCE_A,
    DOMINANCE_B,
    DOMINANCE_CROSSING,
    DOMINANCE_EQUAL,
    average_score_distribution,
    default_tau_grid,
    dominance,
    empirical_tail,
    profile_area,
    profile_variance,
    profile_with_bands,
    rank_distribution,
    readout_median,
    rescaled_tau_axis,
    run_score_distribution,
)
from core.score_data import task_means


def _equal_runs_set(algorithm_id: str = "A", seed: int = 0, num_tasks: int = 5, runs: int = 4) -> ScoreSet:
    rng = np.random.default_rng(seed)
    return ScoreSet.from_runs(
        algorithm_id, {f"t{m}": rng.uniform(0, 2, size=runs) for m in range(num_tasks)}
    )


def _ragged_set(algorithm_id: str = "A", seed: int = 0) -> ScoreSet:
    rng = np.random.default_rng(seed)
    return ScoreSet.from_runs(
        algorithm_id, {f"t{m}": rng.uniform(0, 2, size=1 + m) for m in range(5)}
    )


class TestRunScoreDistribution(unittest.TestCase):
    """Tests for run-score and average-score profiles"""

    def test_equal_runs_matches_pooled_tail_exactly(self):
        """Test equal run counts give exactly the pooled empirical tail"""
        s = _equal_runs_set()
        grid = default_tau_grid([s])
        curve = run_score_distribution(s, grid)
        for tau, value in zip(grid, curve.values):
            self.assertEqual(value, empirical_tail(s.values, tau))

    def test_ragged_runs_weight_tasks_equally(self):
        """Test unequal run counts average per-task tails"""
        s = _ragged_set()
        grid = default_tau_grid([s])
        curve = run_score_distribution(s, grid)
        for i, tau in enumerate(grid):
            expected = np.mean([empirical_tail(runs, tau) for runs in s.task_runs()])
            self.assertAlmostEqual(curve.values[i], expected, places=12)

    def test_strict_comparison(self):
        """Test a score equal to tau does not count as above it"""
        s = ScoreSet.from_runs("A", {"a": [1.0, 2.0]})
        curve = run_score_distribution(s, [0.0, 1.0, 2.0])
        self.assertEqual(curve.values.tolist(), [1.0, 0.5, 0.0])

    def test_single_run_perturbation_bound(self):
        """Test moving one run changes the profile by at most 1/(M*N_m)"""
        s = _equal_runs_set(num_tasks=6, runs=5)
        values = s.values.copy()
        values[7] = values[7] + 0.8
        moved = s.with_values(values)
        grid = default_tau_grid([s, moved])
        difference = np.abs(
            run_score_distribution(s, grid).values - run_score_distribution(moved, grid).values
        )
        self.assertLessEqual(difference.max(), 1 / (6 * 5) + 1e-15)
        self.assertGreater(difference.max(), 0)

    def test_average_score_distribution(self):
        """Test the task-mean profile counts tasks above tau"""
        s = _ragged_set()
        means = task_means(s)
        curve = average_score_distribution(s, [0.5, 1.0])
        self.assertEqual(curve.kind, ProfileKind.TASK_MEANS)
        self.assertAlmostEqual(curve.values[0], np.mean(means > 0.5))
        self.assertAlmostEqual(curve.values[1], np.mean(means > 1.0))

    def test_default_grid_brackets_scores(self):
        """Test the default grid starts below 1 and ends at 0"""
        s = _ragged_set()
        curve = run_score_distribution(s, default_tau_grid([s]))
        self.assertEqual(curve.values[0], 1.0)
        self.assertEqual(curve.values[-1], 0.0)

    def test_constant_scores_grid(self):
        """Test zero spread still gives a grid around the single value"""
        grid = default_tau_grid([ScoreSet.from_runs("A", {"a": [3.0, 3.0]})])
        self.assertEqual(grid.tolist(), [2.0, 3.0, 4.0])

    def test_subsampled_profile_is_unbiased(self):
        """Test averaging over every with-replacement draw recovers the pool profile"""
        pool = {"a": [0.2, 0.7, 1.4], "b": [0.5, 0.5, 1.1]}
        pool_set = ScoreSet.from_runs("A", pool)
        grid = default_tau_grid([pool_set])
        draws = [list(itertools.product(runs, repeat=2)) for runs in pool.values()]
        total = np.zeros(grid.size)
        count = 0
        for runs_a, runs_b in itertools.product(*draws):
            sample = ScoreSet.from_runs("A", {"a": list(runs_a), "b": list(runs_b)})
            total += run_score_distribution(sample, grid).values
            count += 1
        np.testing.assert_allclose(total / count, run_score_distribution(pool_set, grid).values, atol=1e-12)

    def test_median_readout_is_pooled_median(self):
        """Test the readout of an odd pooled count is the middle order statistic"""
        for seed in range(10):
            with self.subTest(seed=seed):
                s = _equal_runs_set(seed=seed, num_tasks=5, runs=3)
                curve = run_score_distribution(s, default_tau_grid([s]))
                middle = np.sort(s.values)[s.total_runs // 2]
                self.assertEqual(readout_median(curve), middle)
        tied = ScoreSet.from_runs("A", {"a": [1.0, 2.0, 2.0], "b": [2.0, 3.0, 3.0], "c": [0.0, 2.0, 5.0]})
        self.assertEqual(readout_median(run_score_distribution(tied, default_tau_grid([tied]))), 2.0)


class TestProfileBands(unittest.TestCase):
    """Tests for bootstrap bands"""

    def tearDown(self):
        shutdown_executor()

    def test_bands_contain_curve(self):
        """Test bands lie in [0, 1] and contain the point curve"""
        s = _ragged_set()
        curve = profile_with_bands(s, default_tau_grid([s]), replicates=300, seed=4)
        self.assertTrue(curve.has_bands)
        self.assertTrue(np.all(curve.lower <= curve.values))
        self.assertTrue(np.all(curve.values <= curve.upper))
        self.assertTrue(np.all(curve.lower >= 0) and np.all(curve.upper <= 1))

    def test_constant_data_collapses_bands(self):
        """Test identical runs give bands equal to the curve"""
        s = ScoreSet.from_runs("A", {"a": [0.5] * 3, "b": [1.5] * 2})
        curve = profile_with_bands(s, [0.0, 1.0, 2.0], replicates=50)
        np.testing.assert_array_equal(curve.lower, curve.values)
        np.testing.assert_array_equal(curve.upper, curve.values)

    def test_bands_independent_of_workers(self):
        """Test threaded bands match inline bands exactly"""
        s = _equal_runs_set()
        grid = default_tau_grid([s])
        inline = profile_with_bands(s, grid, replicates=600, seed=9)
        initialize_executor(3)
        threaded = profile_with_bands(s, grid, replicates=600, seed=9)
        np.testing.assert_array_equal(inline.lower, threaded.lower)
        np.testing.assert_array_equal(inline.upper, threaded.upper)

    def test_records(self):
        """Test exported records carry bands"""
        s = _equal_runs_set()
        curve = profile_with_bands(s, [0.5, 1.0], replicates=50)
        records = curve.to_records()
        self.assertEqual([r["tau"] for r in records], [0.5, 1.0])
        self.assertEqual(set(records[0]), {"tau", "value", "lower", "upper"})


class TestProfileReadouts(unittest.TestCase):
    """Tests for area, median and variance readouts"""

    def test_area_is_mean_for_nonnegative_scores(self):
        """Test the area from zero equals the mean of task means"""
        for s in (_equal_runs_set(), _ragged_set()):
            with self.subTest(runs=s.run_counts.tolist()):
                curve = run_score_distribution(s, default_tau_grid([s]))
                self.assertAlmostEqual(profile_area(curve), float(np.mean(task_means(s))), places=12)

    def test_area_below_grid_counts_as_one(self):
        """Test the stretch between the lower limit and the grid adds its width"""
        s = ScoreSet.from_runs("A", {"a": [2.0, 3.0]})
        curve = run_score_distribution(s, [1.0, 2.0, 3.0])
        # 1 on [0, 1], 1 on [1, 2], 0.5 on [2, 3]
        self.assertAlmostEqual(profile_area(curve), 2.5)

    def test_area_lower_limit_inside_grid(self):
        """Test the integral starts at the lower limit"""
        s = ScoreSet.from_runs("A", {"a": [2.0, 3.0]})
        curve = run_score_distribution(s, [1.0, 2.0, 3.0])
        self.assertAlmostEqual(profile_area(curve, lower_limit=1.5), 0.5 + 0.5)

    def test_median_readout(self):
        """Test the median is the first tau at or below one half"""
        curve = ProfileCurve(np.array([0.0, 1.0, 2.0, 3.0]), np.array([1.0, 0.75, 0.5, 0.25]))
        self.assertEqual(readout_median(curve), 2.0)
        never = ProfileCurve(np.array([0.0, 1.0]), np.array([1.0, 0.75]))
        self.assertIsNone(readout_median(never))

    def test_variance_of_task_means_exceeds_runs(self):
        """Test the task-mean profile is noisier on runs {0, 0, 1, 1} at tau 0.5"""
        s = ScoreSet.from_runs("A", {f"t{m}": [0.0, 0.0, 1.0, 1.0] for m in range(10)})
        runs_var, means_var = profile_variance(s, 0.5, resamples=4000, seed=1)
        # F = 1/2 per task: (1/M^2) * M * (1/4) / 4
        self.assertAlmostEqual(runs_var, 0.0625 / 10)
        # G = P(at least three of four draws are 1) = 5/16
        self.assertAlmostEqual(means_var, (5 / 16) * (11 / 16) / 10, delta=0.002)
        self.assertGreater(means_var, runs_var)

    def test_variance_deterministic(self):
        """Test the resampled variance is a function of the seed"""
        s = _ragged_set()
        self.assertEqual(profile_variance(s, 1.0, 200, 3), profile_variance(s, 1.0, 200, 3))


class TestRescaledAxis(unittest.TestCase):
    """Tests for the non-linear tau axis"""

    def test_uniform_scores_give_linear_axis(self):
        """Test evenly spread scores map each tau to itself"""
        grid = np.linspace(0.0, 1.0, 101)
        s = ScoreSet.from_runs("A", {"a": grid})
        axis = rescaled_tau_axis([run_score_distribution(s, grid)])
        positions = np.array(list(axis.values()))
        np.testing.assert_allclose(positions, grid, atol=1e-9)

    def test_axis_is_monotone(self):
        """Test positions ascend from 0 to 1"""
        a, b = _ragged_set("A", 1), _ragged_set("B", 2)
        grid = default_tau_grid([a, b])
        axis = rescaled_tau_axis([run_score_distribution(a, grid), run_score_distribution(b, grid)])
        positions = list(axis.values())
        self.assertEqual(positions[0], 0.0)
        self.assertEqual(positions[-1], 1.0)
        self.assertTrue(all(p <= q for p, q in zip(positions, positions[1:])))

    def test_different_grids_rejected(self):
        """Test profiles on different grids cannot share an axis"""
        s = _ragged_set()
        with self.assertRaises(ValueError):
            rescaled_tau_axis([run_score_distribution(s, [0.0, 1.0]), run_score_distribution(s, [0.0, 2.0])])


class TestDominance(unittest.TestCase):
    """Tests for descriptive stochastic dominance"""

    def setUp(self):
        self.grid = [0.0, 0.5, 1.0, 1.5, 2.0]

    def test_shifted_scores_dominate(self):
        """Test a uniformly better algorithm dominates"""
        low = ScoreSet.from_runs("L", {"a": [0.2, 0.6], "b": [1.1]})
        high = low.with_values(low.values + 0.5, "H")
        a = run_score_distribution(high, self.grid)
        b = run_score_distribution(low, self.grid)
        self.assertEqual(dominance(a, b), DOMINANCE_A)
        self.assertEqual(dominance(b, a), DOMINANCE_B)
        self.assertEqual(dominance(a, a), DOMINANCE_EQUAL)

    def test_crossing(self):
        """Test curves that cross dominate neither way"""
        wide = run_score_distribution(ScoreSet.from_runs("W", {"a": [0.1, 1.9]}), self.grid)
        narrow = run_score_distribution(ScoreSet.from_runs("N", {"a": [0.9, 1.1]}), self.grid)
        self.assertEqual(dominance(wide, narrow), DOMINANCE_CROSSING)


class TestRankDistribution(unittest.TestCase):
    """Tests for bootstrap rank distributions"""

    def tearDown(self):
        shutdown_executor()

    def test_doubly_stochastic(self):
        """Test every matrix sums to one by row and by column"""
        sets = [_ragged_set(name, seed) for seed, name in enumerate("ABC")]
        ranks = rank_distribution(sets, replicates=2500, seed=1)
        self.assertEqual(ranks.algorithms, ("A", "B", "C"))
        for matrix in [ranks.mean_matrix, *ranks.per_task.values()]:
            np.testing.assert_allclose(matrix.sum(axis=0), 1.0, atol=1e-9)
            np.testing.assert_allclose(matrix.sum(axis=1), 1.0, atol=1e-9)

    def test_dominant_algorithm_ranks_first(self):
        """Test an algorithm far ahead on every task gets rank 1 with probability 1"""
        low = _ragged_set("low")
        high = low.with_values(low.values + 10.0, "high")
        ranks = rank_distribution([low, high], replicates=500)
        np.testing.assert_array_equal(ranks.mean_matrix, [[0.0, 1.0], [1.0, 0.0]])

    def test_ties_share_mass(self):
        """Test constant identical algorithms split every rank evenly"""
        s = ScoreSet.from_runs("A", {"a": [1.0, 1.0], "b": [2.0]})
        ranks = rank_distribution([s, s.with_values(s.values, "B")], replicates=100)
        np.testing.assert_array_equal(ranks.per_task["a"], [[0.5, 0.5], [0.5, 0.5]])

    def test_independent_of_workers(self):
        """Test threaded rank distributions match inline ones exactly"""
        sets = [_ragged_set("A", 1), _ragged_set("B", 2)]
        inline = rank_distribution(sets, replicates=3500, seed=6)
        initialize_executor(4)
        threaded = rank_distribution(sets, replicates=3500, seed=6)
        np.testing.assert_array_equal(inline.mean_matrix, threaded.mean_matrix)

    def test_task_mismatch(self):
        """Test algorithms must share the task list"""
        a = ScoreSet.from_runs("A", {"a": [1.0]})
        b = ScoreSet.from_runs("B", {"b": [1.0]})
        with self.assertRaises(TaskMismatchError):
            rank_distribution([a, b], replicates=10)


if __name__ == "__main__":
    unittest.main()
