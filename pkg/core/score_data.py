"""
Score ingestion, serialization and normalization.

JSON input holds one algorithm per object, optionally wrapped in an array:
    {"alg": "DER", "scores": {"Pong": [1.0, 2.0], ...}}

CSV input has the header ``algorithm,task,run,score`` with run indices
contiguous from 0 for every (algorithm, task).
"""

import io
import json
import re
from collections.abc import Iterable, Mapping, Sequence
from typing import Any, BinaryIO

import numpy as np
import pandas as pd

from common.exceptions import NormalizationError, ScoreDataError
from common.logger import get_logger
from common.models import NormalizationSpec, ScoreSet

logger = get_logger(__name__)

FORMAT_JSON = "json"
FORMAT_CSV = "csv"
SUPPORTED_FORMATS = (FORMAT_JSON, FORMAT_CSV)

CSV_COLUMNS = ["algorithm", "task", "run", "score"]
_NUMBER = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")


def _read_bytes(source: bytes | BinaryIO) -> bytes:
    if isinstance(source, (bytes, bytearray)):
        return bytes(source)
    return source.read()


def detect_format(path: str) -> str:
    """Guess the input format from a file name; JSON unless it ends in .csv."""
    return FORMAT_CSV if str(path).lower().endswith(".csv") else FORMAT_JSON


def load_scores(source: bytes | BinaryIO, format: str = FORMAT_JSON) -> dict[str, ScoreSet]:
    """
    Parse raw scores into one ScoreSet per algorithm.

    Args:
        source: Byte string or binary stream
        format: "json" or "csv"

    Returns:
        Mapping of algorithm id to ScoreSet, in order of first appearance

    Raises:
        ScoreDataError: Malformed input, naming the offending line or key
    """
    data = _read_bytes(source)
    if format == FORMAT_JSON:
        sets = _load_json(data)
    elif format == FORMAT_CSV:
        sets = _load_csv(data)
    else:
        raise ScoreDataError(
            f"Unsupported format {format!r}, expected one of {SUPPORTED_FORMATS}"
        )

    for score_set in sets.values():
        logger.debug_algorithm(
            score_set.algorithm_id,
            message=f"Loaded {score_set.num_tasks} tasks, {score_set.total_runs} runs",
        )
    return sets


def _reject_duplicate_keys(pairs: list[tuple[str, Any]]) -> dict[str, Any]:
    keys = [k for k, _ in pairs]
    duplicates = {k for k in keys if keys.count(k) > 1}
    if duplicates:
        key = sorted(duplicates)[0]
        raise ScoreDataError("Duplicate key", location=f'key "{key}"')
    return dict(pairs)


def _load_json(data: bytes) -> dict[str, ScoreSet]:
    try:
        document = json.loads(data, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as e:
        raise ScoreDataError(
            f"Invalid JSON: {e.msg}", location=f"line {e.lineno} column {e.colno}"
        ) from e
    except UnicodeDecodeError as e:
        raise ScoreDataError(f"Input is not UTF-8: {e}") from e

    objects = document if isinstance(document, list) else [document]
    sets: dict[str, ScoreSet] = {}
    for i, obj in enumerate(objects):
        prefix = f"[{i}]." if isinstance(document, list) else ""
        score_set = _parse_algorithm_object(obj, prefix)
        if score_set.algorithm_id in sets:
            raise ScoreDataError(
                f"Algorithm {score_set.algorithm_id!r} appears twice",
                location=f'key "{prefix}alg"',
            )
        sets[score_set.algorithm_id] = score_set

    if not sets:
        raise ScoreDataError("No algorithms in input")
    return sets


def _parse_algorithm_object(obj: Any, prefix: str) -> ScoreSet:
    if not isinstance(obj, Mapping):
        raise ScoreDataError("Expected an object", location=f'key "{prefix or "$"}"')

    algorithm_id = obj.get("alg")
    if not isinstance(algorithm_id, str) or not algorithm_id:
        raise ScoreDataError(
            "Missing or non-string algorithm id", location=f'key "{prefix}alg"'
        )

    scores = obj.get("scores")
    if not isinstance(scores, Mapping) or not scores:
        raise ScoreDataError(
            "Missing or empty scores object", location=f'key "{prefix}scores"'
        )

    runs = []
    for task, values in scores.items():
        location = f'key "{prefix}scores.{task}"'
        if not isinstance(values, list):
            raise ScoreDataError("Expected a list of run scores", location=location)
        if not values:
            raise ScoreDataError(f"Task {task!r} has no runs", location=location)
        for value in values:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ScoreDataError(f"Non-numeric score {value!r}", location=location)
        array = np.asarray(values, dtype=float)
        if not np.all(np.isfinite(array)):
            raise ScoreDataError("NaN or infinite score", location=location)
        runs.append((task, array))

    return ScoreSet.from_runs(algorithm_id, runs)


def _parse_number(text: str) -> float:
    # plain decimal or exponent notation only; float() also takes "1_000", " 3 " and "infinity"
    if not _NUMBER.fullmatch(text):
        return np.nan
    return float(text)


def _load_csv(data: bytes) -> dict[str, ScoreSet]:
    try:
        frame = pd.read_csv(io.BytesIO(data), dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError as e:
        raise ScoreDataError("Empty CSV input", location="line 1") from e
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise ScoreDataError(f"Invalid CSV: {e}") from e

    if list(frame.columns) != CSV_COLUMNS:
        raise ScoreDataError(
            f"Expected header {','.join(CSV_COLUMNS)}, got {','.join(frame.columns)}",
            location="line 1",
        )
    if frame.empty:
        raise ScoreDataError("CSV input has no rows", location="line 2")

    # float() parses the shortest repr back to the identical double
    runs = frame["run"].map(_parse_number)
    scores = frame["score"].map(_parse_number)

    # data rows start on line 2, after the header
    bad_run = runs.isna() | (runs < 0) | (runs != runs.round())
    if bad_run.any():
        row = int(np.flatnonzero(bad_run.to_numpy())[0])
        raise ScoreDataError(
            f"Invalid run index {frame['run'].iloc[row]!r}", location=f"line {row + 2}"
        )
    bad_score = ~np.isfinite(scores.to_numpy(dtype=float, na_value=np.nan))
    if bad_score.any():
        row = int(np.flatnonzero(bad_score)[0])
        raise ScoreDataError(
            f"Invalid score {frame['score'].iloc[row]!r}", location=f"line {row + 2}"
        )
    empty_name = (frame["algorithm"] == "") | (frame["task"] == "")
    if empty_name.any():
        row = int(np.flatnonzero(empty_name.to_numpy())[0])
        raise ScoreDataError("Empty algorithm or task name", location=f"line {row + 2}")

    frame = frame.assign(run=runs.astype(np.int64), score=scores.astype(float))
    frame["line"] = np.arange(len(frame)) + 2

    sets: dict[str, ScoreSet] = {}
    for algorithm_id, alg_rows in frame.groupby("algorithm", sort=False):
        task_runs = []
        for task, task_rows in alg_rows.groupby("task", sort=False):
            ordered = task_rows.sort_values("run", kind="stable")
            expected = np.arange(len(ordered))
            if not np.array_equal(ordered["run"].to_numpy(), expected):
                first_line = int(task_rows["line"].iloc[0])
                raise ScoreDataError(
                    f"Run indices of ({algorithm_id}, {task}) must be contiguous from 0",
                    location=f"line {first_line}",
                )
            task_runs.append((task, ordered["score"].to_numpy()))
        sets[algorithm_id] = ScoreSet.from_runs(algorithm_id, task_runs)
    return sets


def dump_scores(sets: Mapping[str, ScoreSet] | Iterable[ScoreSet], format: str = FORMAT_JSON) -> bytes:
    """
    Serialize score sets so that load_scores reproduces them exactly.

    Args:
        sets: Score sets, as a mapping or an iterable
        format: "json" or "csv"

    Returns:
        UTF-8 encoded document
    """
    score_sets = list(sets.values()) if isinstance(sets, Mapping) else list(sets)

    if format == FORMAT_JSON:
        document = [{"alg": s.algorithm_id, "scores": s.to_dict()} for s in score_sets]
        return (json.dumps(document, indent=2) + "\n").encode("utf-8")

    if format == FORMAT_CSV:
        rows = [
            (s.algorithm_id, task, run, float(value))
            for s in score_sets
            for task, runs in zip(s.tasks, s.task_runs())
            for run, value in enumerate(runs)
        ]
        frame = pd.DataFrame(rows, columns=CSV_COLUMNS)
        return frame.to_csv(index=False, lineterminator="\n").encode("utf-8")

    raise ScoreDataError(
        f"Unsupported format {format!r}, expected one of {SUPPORTED_FORMATS}"
    )


def load_normalization(source: bytes | BinaryIO) -> NormalizationSpec:
    """
    Parse a normalization spec: {"task": {"low": 0, "high": 100}, ...}

    Raises:
        ScoreDataError: Malformed document
        NormalizationError: Degenerate reference points
    """
    data = _read_bytes(source)
    try:
        document = json.loads(data, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as e:
        raise ScoreDataError(
            f"Invalid JSON: {e.msg}", location=f"line {e.lineno} column {e.colno}"
        ) from e

    if not isinstance(document, Mapping) or not document:
        raise ScoreDataError("Normalization spec must be a non-empty object")

    bounds = {}
    for task, pair in document.items():
        if not isinstance(pair, Mapping):
            raise ScoreDataError("Expected {low, high}", location=f'key "{task}"')
        for key in ("low", "high"):
            value = pair.get(key)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ScoreDataError(
                    f"Missing or non-numeric {key}", location=f'key "{task}.{key}"'
                )
        bounds[task] = (pair["low"], pair["high"])
    return NormalizationSpec(bounds)


def normalize(raw: ScoreSet, spec: NormalizationSpec) -> ScoreSet:
    """
    Map raw scores to normalized scores, (x - low) / (high - low) per task.

    Args:
        raw: Raw score set
        spec: Reference points covering every task of ``raw``

    Returns:
        Normalized ScoreSet with the same task/run structure
    """
    lows = np.empty(raw.num_tasks)
    highs = np.empty(raw.num_tasks)
    for m, task in enumerate(raw.tasks):
        lows[m], highs[m] = spec.for_task(task)

    counts = raw.run_counts
    low = np.repeat(lows, counts)
    high = np.repeat(highs, counts)
    return raw.with_values((raw.values - low) / (high - low))


def minmax_normalization(raw_sets: Sequence[ScoreSet]) -> NormalizationSpec:
    """
    Reference points from the observed range: per task, the lowest and the
    highest run score across all given algorithms map to 0 and 1.
    """
    if not raw_sets:
        raise NormalizationError("Min-max normalization needs at least one score set")
    lows: dict[str, float] = {}
    highs: dict[str, float] = {}
    for score_set in raw_sets:
        for task, runs in zip(score_set.tasks, score_set.task_runs()):
            lows[task] = min(lows.get(task, np.inf), float(runs.min()))
            highs[task] = max(highs.get(task, -np.inf), float(runs.max()))
    return NormalizationSpec({task: (lows[task], highs[task]) for task in lows})


def max_score_normalization(tasks: Iterable[str], max_score: float) -> NormalizationSpec:
    """Divide every task by a known maximum score (low 0, high max_score)."""
    return NormalizationSpec({task: (0.0, max_score) for task in tasks})


def pooled_scores(s: ScoreSet) -> np.ndarray:
    """All run scores concatenated in task order, run order preserved."""
    return s.values


def task_means(s: ScoreSet) -> np.ndarray:
    """Mean score of each task across its runs, in task order."""
    return np.add.reduceat(s.values, s.offsets[:-1]) / s.run_counts
