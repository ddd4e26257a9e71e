"""
Main entry point for the scorecard command-line tool.
"""

import sys
import traceback

from common import config
from common.exceptions import (
    ConfigError,
    EstimationError,
    ScoreDataError,
    UsageError,
)
from common.logger import get_logger
from core.executor import initialize_executor, shutdown_executor

from app import create_app

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_DATA_ERROR = 1
EXIT_USAGE_ERROR = 2


def run_command(args) -> int:
    """Run the selected subcommand and map its errors to exit codes."""
    try:
        return args.handler(args)
    except (UsageError, ConfigError) as e:
        logger.error(f"{args.command}: {e}")
        logger.debug(traceback.format_exc())
        return EXIT_USAGE_ERROR
    except (ScoreDataError, EstimationError, OSError) as e:
        logger.error(f"{args.command}: {e}")
        logger.debug(traceback.format_exc())
        return EXIT_DATA_ERROR


def main(argv: list[str] | None = None) -> int:
    """Main application entry point."""
    # argparse exits with status 2 on bad usage
    args = create_app().parse_args(argv)

    logger.info("=" * 60)
    logger.info(f"scorecard {args.command} starting")
    logger.info("=" * 60)

    if config.error is not None:
        logger.error(f"Invalid settings file {config.path}: {config.error}")
        return EXIT_USAGE_ERROR

    if args.workers is not None and args.workers < 1:
        logger.error(f"--workers must be >= 1, got {args.workers}")
        return EXIT_USAGE_ERROR

    initialize_executor(args.workers or config.max_workers)
    try:
        code = run_command(args)
    finally:
        shutdown_executor()

    logger.info("=" * 60)
    logger.info(f"scorecard {args.command} finished with exit code {code}")
    logger.info("=" * 60)
    return code


if __name__ == "__main__":
    sys.exit(main())
