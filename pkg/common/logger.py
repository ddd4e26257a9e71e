import logging
from functools import cache

from .config import config

_MAX_MESSAGE_LENGTH = 1000


class _Logger:
    """
    Custom logger wrapper with algorithm-scoped logging methods.

    Usage:
        from common.logger import get_logger

        logger = get_logger(__name__)

        # Standard logging
        logger.info("Bootstrap started")
        logger.debug("Debug message")

        # Algorithm-scoped logging
        logger.info_algorithm("DER", metric="iqm", message="Interval ready")
    """

    def __init__(self, name: str | None = None):
        """
        Initialize logger with given name.

        Args:
            name: Logger name, typically __name__ of the calling module.
        """
        if name is None:
            name = "scorecard"

        log = logging.getLogger(name)
        log.setLevel(config.log_level)
        formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
        )
        # StreamHandler writes to stderr; stdout stays free for command output
        console = logging.StreamHandler()
        console.setFormatter(formatter)
        log.addHandler(console)
        log.propagate = False

        self._logger = log

    def debug(self, msg: str, *args, **kwargs) -> None:
        self._logger.debug(msg, *args, **kwargs)

    def info(self, msg: str, *args, **kwargs) -> None:
        self._logger.info(msg, *args, **kwargs)

    def warning(self, msg: str, *args, **kwargs) -> None:
        self._logger.warning(msg, *args, **kwargs)

    def error(self, msg: str, *args, **kwargs) -> None:
        self._logger.error(msg, *args, **kwargs)

    def exception(self, msg: str, *args, **kwargs) -> None:
        self._logger.exception(msg, *args, **kwargs)

    def debug_algorithm(
        self, algorithm_id: str | None, metric: str | None = None, message: str = ""
    ) -> None:
        """Log algorithm-scoped message at DEBUG level."""
        self._log_algorithm(algorithm_id, logging.DEBUG, metric, message)

    def info_algorithm(
        self, algorithm_id: str | None, metric: str | None = None, message: str = ""
    ) -> None:
        """Log algorithm-scoped message at INFO level."""
        self._log_algorithm(algorithm_id, logging.INFO, metric, message)

    def warning_algorithm(
        self, algorithm_id: str | None, metric: str | None = None, message: str = ""
    ) -> None:
        """Log algorithm-scoped message at WARNING level."""
        self._log_algorithm(algorithm_id, logging.WARNING, metric, message)

    def error_algorithm(
        self, algorithm_id: str | None, metric: str | None = None, message: str = ""
    ) -> None:
        """Log algorithm-scoped message at ERROR level."""
        self._log_algorithm(algorithm_id, logging.ERROR, metric, message)

    def _log_algorithm(
        self,
        algorithm_id: str | None,
        level: int = logging.INFO,
        metric: str | None = None,
        message: str = "",
    ) -> None:
        """
        Unified logging method for per-algorithm work with standardized format.

        Log output order: algorithm, metric, message

        Args:
            algorithm_id: Algorithm identifier, can be None
            level: Log level (logging.DEBUG, logging.INFO, etc.)
            metric: Metric or statistic name (optional)
            message: Log message
        """
        parts = [f"Algorithm {algorithm_id or 'unknown'}"]

        if metric:
            parts.append(f"Metric {metric}")

        if message:
            message_preview = message.replace("\n", "\\n")
            if len(message_preview) > _MAX_MESSAGE_LENGTH:
                message_preview = message_preview[:_MAX_MESSAGE_LENGTH] + "..."
            parts.append(message_preview)

        self._logger.log(level, " - ".join(parts))


@cache
def get_logger(name: str | None = None) -> _Logger:
    """
    Get a Logger instance. Cached to ensure same name returns same instance.

    Args:
        name: Logger name, typically __name__ of the calling module.

    Returns:
        Logger instance
    """
    return _Logger(name)
