from .config import config
from .exceptions import (
    ConfigError,
    EstimationError,
    NormalizationError,
    ScorecardError,
    ScoreDataError,
    TaskMismatchError,
    UsageError,
)
from .logger import get_logger

__all__ = [
    "config",
    "ConfigError",
    "EstimationError",
    "NormalizationError",
    "ScorecardError",
    "ScoreDataError",
    "TaskMismatchError",
    "UsageError",
    "get_logger",
    "TOOL_VERSION",
    "SCHEMA_VERSION",
]

TOOL_VERSION = "1.0.0"

# Bumped whenever the JSON report layout changes
SCHEMA_VERSION = 1
