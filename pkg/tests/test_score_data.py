"""
Unit tests for core.score_data module
"""

import io
import json
import unittest

import numpy as np

from common.exceptions import NormalizationError, ScoreDataError
from common.models import NormalizationSpec, ScoreSet
from core.score_data import (
    detect_format,
    dump_scores,
    load_normalization,
    load_scores,
    max_score_normalization,
    minmax_normalization,
    normalize,
    pooled_scores,
    task_means,
)


def _json(document) -> bytes:
    return json.dumps(document).encode("utf-8")


class TestLoadJson(unittest.TestCase):
    """Tests for JSON score ingestion"""

    def test_load_single_algorithm(self):
        """Test a single algorithm object keeps task and run order"""
        data = _json({"alg": "A", "scores": {"t1": [1.0, 2.0], "t2": [3.0]}})
        sets = load_scores(data, "json")

        self.assertEqual(list(sets), ["A"])
        s = sets["A"]
        self.assertEqual(s.tasks, ("t1", "t2"))
        self.assertEqual(s.run_counts.tolist(), [2, 1])
        self.assertEqual(s.values.tolist(), [1.0, 2.0, 3.0])

    def test_load_array_of_algorithms(self):
        """Test an array holds several algorithms in order"""
        data = _json(
            [
                {"alg": "B", "scores": {"t": [1]}},
                {"alg": "A", "scores": {"t": [2]}},
            ]
        )
        sets = load_scores(io.BytesIO(data))
        self.assertEqual(list(sets), ["B", "A"])

    def test_empty_task_list_names_key(self):
        """Test a task with an empty run list is rejected naming the key"""
        data = _json({"alg": "A", "scores": {"t1": []}})
        with self.assertRaises(ScoreDataError) as cm:
            load_scores(data)
        self.assertIn('key "scores.t1"', str(cm.exception))

    def test_nan_rejected(self):
        """Test NaN scores are rejected"""
        data = b'{"alg": "A", "scores": {"t1": [1.0, NaN]}}'
        with self.assertRaises(ScoreDataError) as cm:
            load_scores(data)
        self.assertIn("scores.t1", str(cm.exception))

    def test_non_numeric_rejected(self):
        """Test strings and booleans are not scores"""
        for value in ('"1.0"', "true", "null"):
            with self.subTest(value=value):
                data = ('{"alg": "A", "scores": {"t1": [%s]}}' % value).encode()
                with self.assertRaises(ScoreDataError):
                    load_scores(data)

    def test_duplicate_task_key_rejected(self):
        """Test a repeated task key is an error, not last-one-wins"""
        data = b'{"alg": "A", "scores": {"t1": [1.0], "t1": [2.0]}}'
        with self.assertRaises(ScoreDataError) as cm:
            load_scores(data)
        self.assertIn('key "t1"', str(cm.exception))

    def test_duplicate_algorithm_rejected(self):
        """Test the same algorithm twice in one file is an error"""
        data = _json([{"alg": "A", "scores": {"t": [1]}}, {"alg": "A", "scores": {"t": [2]}}])
        with self.assertRaises(ScoreDataError):
            load_scores(data)

    def test_invalid_json_names_line(self):
        """Test syntax errors report line and column"""
        with self.assertRaises(ScoreDataError) as cm:
            load_scores(b'{"alg": "A",\n "scores": {\n')
        self.assertIn("line", str(cm.exception))

    def test_missing_algorithm_id(self):
        """Test a missing alg field names the key"""
        with self.assertRaises(ScoreDataError) as cm:
            load_scores(_json({"scores": {"t": [1]}}))
        self.assertIn('key "alg"', str(cm.exception))

    def test_unsupported_format(self):
        """Test unknown formats are rejected"""
        with self.assertRaises(ScoreDataError):
            load_scores(b"", "xml")


class TestLoadCsv(unittest.TestCase):
    """Tests for CSV score ingestion"""

    def test_load_csv(self):
        """Test rows are grouped by algorithm and task, runs ordered by index"""
        data = b"algorithm,task,run,score\nA,t1,1,2.0\nA,t1,0,1.0\nA,t2,0,5\nB,t1,0,3.5\n"
        sets = load_scores(data, "csv")

        self.assertEqual(list(sets), ["A", "B"])
        self.assertEqual(sets["A"].runs("t1").tolist(), [1.0, 2.0])
        self.assertEqual(sets["A"].runs("t2").tolist(), [5.0])
        self.assertEqual(sets["B"].values.tolist(), [3.5])

    def test_wrong_header(self):
        """Test the header must be exactly algorithm,task,run,score"""
        with self.assertRaises(ScoreDataError) as cm:
            load_scores(b"alg,task,run,score\nA,t,0,1\n", "csv")
        self.assertIn("line 1", str(cm.exception))

    def test_bad_score_names_line(self):
        """Test a non-numeric score reports its line number"""
        data = b"algorithm,task,run,score\nA,t,0,1\nA,t,1,abc\n"
        with self.assertRaises(ScoreDataError) as cm:
            load_scores(data, "csv")
        self.assertIn("line 3", str(cm.exception))

    def test_infinite_score_rejected(self):
        """Test inf is not a valid score"""
        with self.assertRaises(ScoreDataError) as cm:
            load_scores(b"algorithm,task,run,score\nA,t,0,inf\n", "csv")
        self.assertIn("line 2", str(cm.exception))

    def test_loose_number_spellings_rejected(self):
        """Test only plain decimal and exponent notation parse as scores or runs"""
        for text in ("1_000", " 3", "3 ", "infinity", "0x10", "1e", "+", ""):
            with self.subTest(text=text):
                data = f"algorithm,task,run,score\nA,t,0,{text}\n".encode()
                with self.assertRaises(ScoreDataError) as cm:
                    load_scores(data, "csv")
                self.assertIn("line 2", str(cm.exception))
        with self.assertRaises(ScoreDataError):
            load_scores(b"algorithm,task,run,score\nA,t,1_0,1\n", "csv")

    def test_number_notations_accepted(self):
        """Test signs, exponents and bare fractions parse exactly"""
        data = b"algorithm,task,run,score\nA,t,0,-1.5e-3\nA,t,1,.5\nA,t,2,+2\nA,t,3,7.\n"
        self.assertEqual(load_scores(data, "csv")["A"].values.tolist(), [-0.0015, 0.5, 2.0, 7.0])

    def test_run_gap_rejected(self):
        """Test run indices must be contiguous from 0"""
        data = b"algorithm,task,run,score\nA,t,0,1\nA,t,2,1\n"
        with self.assertRaises(ScoreDataError):
            load_scores(data, "csv")

    def test_negative_run_rejected(self):
        """Test negative run indices report their line"""
        with self.assertRaises(ScoreDataError) as cm:
            load_scores(b"algorithm,task,run,score\nA,t,-1,1\n", "csv")
        self.assertIn("line 2", str(cm.exception))

    def test_header_only(self):
        """Test a CSV without data rows is rejected"""
        with self.assertRaises(ScoreDataError):
            load_scores(b"algorithm,task,run,score\n", "csv")


class TestDumpScores(unittest.TestCase):
    """Tests for score serialization"""

    def test_round_trip_preserves_values_exactly(self):
        """Test dump then load reproduces awkward floats bit for bit"""
        s = ScoreSet.from_runs(
            "A", {"t1": [0.1 + 0.2, 1 / 3, -1e-300], "t2": [12345.678901234567]}
        )
        for format in ("json", "csv"):
            with self.subTest(format=format):
                loaded = load_scores(dump_scores([s], format), format)
                self.assertEqual(loaded["A"], s)

    def test_dump_is_deterministic(self):
        """Test dumping twice gives identical bytes"""
        s = ScoreSet.from_runs("A", {"t": [1.5, 2.5]})
        self.assertEqual(dump_scores({"A": s}, "csv"), dump_scores({"A": s}, "csv"))


class TestNormalization(unittest.TestCase):
    """Tests for score normalization"""

    def test_normalize_example(self):
        """Test low maps to 0 and high to 1"""
        raw = ScoreSet.from_runs("A", {"t": [0.0, 50.0, 100.0]})
        spec = NormalizationSpec({"t": (0.0, 100.0)})
        self.assertEqual(normalize(raw, spec).values.tolist(), [0.0, 0.5, 1.0])

    def test_normalize_reference_points(self):
        """Test the reference points themselves land on 0 and 1"""
        raw = ScoreSet.from_runs("A", {"a": [-20.7, 14.6], "b": [1.7, 30.5]})
        spec = NormalizationSpec({"a": (-20.7, 14.6), "b": (1.7, 30.5)})
        self.assertEqual(normalize(raw, spec).values.tolist(), [0.0, 1.0, 0.0, 1.0])

    def test_missing_task(self):
        """Test a task without reference points is an error"""
        raw = ScoreSet.from_runs("A", {"t": [1.0], "u": [2.0]})
        with self.assertRaises(NormalizationError):
            normalize(raw, NormalizationSpec({"t": (0.0, 1.0)}))

    def test_equal_reference_points(self):
        """Test high == low is rejected naming the task"""
        with self.assertRaises(NormalizationError) as cm:
            NormalizationSpec({"t": (1.0, 1.0)})
        self.assertIn("t", str(cm.exception))

    def test_load_normalization(self):
        """Test parsing the normalization JSON"""
        spec = load_normalization(_json({"t": {"low": 1, "high": 3}}))
        self.assertEqual(spec.for_task("t"), (1.0, 3.0))

    def test_load_normalization_errors(self):
        """Test malformed and degenerate normalization files"""
        with self.assertRaises(ScoreDataError):
            load_normalization(_json({"t": {"low": 1}}))
        with self.assertRaises(NormalizationError):
            load_normalization(_json({"t": {"low": 2, "high": 2}}))

    def test_minmax_normalization(self):
        """Test the observed range across algorithms maps onto [0, 1]"""
        a = ScoreSet.from_runs("A", {"t": [2.0, 4.0]})
        b = ScoreSet.from_runs("B", {"t": [6.0]})
        spec = minmax_normalization([a, b])
        self.assertEqual(spec.for_task("t"), (2.0, 6.0))
        self.assertEqual(normalize(a, spec).values.tolist(), [0.0, 0.5])

    def test_minmax_zero_spread(self):
        """Test a task where every run is equal cannot be min-max normalized"""
        with self.assertRaises(NormalizationError):
            minmax_normalization([ScoreSet.from_runs("A", {"t": [1.0, 1.0]})])

    def test_max_score_normalization(self):
        """Test dividing by a known maximum score"""
        spec = max_score_normalization(["t"], 1000.0)
        raw = ScoreSet.from_runs("A", {"t": [250.0, 1000.0]})
        self.assertEqual(normalize(raw, spec).values.tolist(), [0.25, 1.0])


class TestScoreViews(unittest.TestCase):
    """Tests for pooled scores and task means"""

    def test_task_means_ragged(self):
        """Test task means with different run counts"""
        s = ScoreSet.from_runs("A", {"t1": [1.0, 3.0], "t2": [10.0], "t3": [1.0, 2.0, 3.0]})
        np.testing.assert_allclose(task_means(s), [2.0, 10.0, 2.0])

    def test_pooled_scores_order(self):
        """Test pooled scores follow task order then run order"""
        s = ScoreSet.from_runs("A", {"b": [2.0, 1.0], "a": [3.0]})
        self.assertEqual(pooled_scores(s).tolist(), [2.0, 1.0, 3.0])

    def test_detect_format(self):
        """Test the format follows the file extension"""
        self.assertEqual(detect_format("runs.CSV"), "csv")
        self.assertEqual(detect_format("runs.json"), "json")
        self.assertEqual(detect_format("runs"), "json")


if __name__ == "__main__":
    unittest.main()
