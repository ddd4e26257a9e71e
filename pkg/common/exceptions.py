class ScorecardError(Exception):
    """Base class for every error raised by scorecard."""


class ScoreDataError(ScorecardError):
    """
    Raised when score input is malformed or violates the data model.

    The optional location names where the problem was found, e.g. ``line 4``
    for CSV input or ``key "scores.t1"`` for JSON input.
    """

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        if location:
            message = f"{message} ({location})"
        super().__init__(message)


class NormalizationError(ScoreDataError):
    """Raised when a normalization spec cannot be applied to a score set."""


class TaskMismatchError(ScoreDataError):
    """Raised when score sets that must share tasks do not."""


class EstimationError(ScorecardError):
    """
    Raised when a statistic fails while evaluating a bootstrap replicate
    or a Monte Carlo trial. Carries the failing replicate index.
    """

    def __init__(self, message: str, replicate: int | None = None):
        self.replicate = replicate
        if replicate is not None:
            message = f"replicate {replicate}: {message}"
        super().__init__(message)


class ConfigError(ScorecardError):
    """Raised when a settings file or experiment config is invalid."""

    def __init__(self, message: str, key: str | None = None):
        self.key = key
        if key:
            message = f"{message} [key: {key}]"
        super().__init__(message)


class UsageError(ScorecardError):
    """Raised for command-line usage errors (unknown metric, too few inputs)."""
