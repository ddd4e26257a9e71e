"""
Process-wide worker pool for bootstrap replicates and harness trials.

Work is cut into fixed index ranges that do not depend on the worker
count, and results come back in range order, so output is the same for
any pool size.
"""

import concurrent.futures
import threading
from collections.abc import Callable
from typing import TypeVar

from common import config
from common.logger import get_logger

logger = get_logger(__name__)

T = TypeVar("T")

# Global thread pool for replicate and trial evaluation
_executor: concurrent.futures.ThreadPoolExecutor | None = None
_max_workers: int = 1
_worker_state = threading.local()


def initialize_executor(max_workers: int | None = None) -> None:
    """
    Create the global thread pool (singleton pattern)

    Args:
        max_workers: Pool size; defaults to executor.max_workers from settings.
            A size of 1 keeps all work on the calling thread.
    """
    global _executor, _max_workers
    if _executor is not None:
        logger.warning("Thread pool already initialized, skipping")
        return

    _max_workers = max_workers or config.max_workers
    if _max_workers > 1:
        _executor = concurrent.futures.ThreadPoolExecutor(
            max_workers=_max_workers,
            thread_name_prefix="replicate_worker",
            initializer=_mark_worker_thread,
        )
    logger.info(f"Initialized executor with {_max_workers} worker(s)")


def shutdown_executor() -> None:
    """
    Shutdown the global thread pool (should be called on application exit)
    """
    global _executor, _max_workers
    if _executor is not None:
        logger.info("Shutting down thread pool")
        _executor.shutdown(wait=True)
        _executor = None
    _max_workers = 1


def _mark_worker_thread() -> None:
    _worker_state.is_worker = True


def _in_worker_thread() -> bool:
    return getattr(_worker_state, "is_worker", False)


def parallel_map(
    fn: Callable[[int, int], T], total: int, chunk_size: int | None = None
) -> list[T]:
    """
    Evaluate ``fn(start, stop)`` over fixed index ranges covering [0, total).

    The ranges depend only on ``total`` and ``chunk_size``, never on the
    worker count, and results come back in range order. Calls made from
    inside a worker run inline so nested parallel work cannot deadlock.

    Args:
        fn: Function of a half-open index range
        total: Number of indices
        chunk_size: Indices per range; defaults to executor.chunk_size

    Returns:
        One result per range, in ascending range order
    """
    chunk_size = chunk_size or config.chunk_size
    ranges = [
        (start, min(start + chunk_size, total)) for start in range(0, total, chunk_size)
    ]

    if _executor is None or _in_worker_thread() or len(ranges) == 1:
        return [fn(start, stop) for start, stop in ranges]

    futures = [_executor.submit(fn, start, stop) for start, stop in ranges]
    # results are collected in submission order, so output order is fixed
    return [future.result() for future in futures]
