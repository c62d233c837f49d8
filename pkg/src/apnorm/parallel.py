"""
Thread budget and an order-preserving parallel map.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "APNORM_THREADS"


def thread_budget(requested: Optional[int] = None) -> int:
    """
    Number of worker threads to use.

    Args:
        requested: Desired degree (None or 0 means the CPU count)

    Returns:
        min(requested, APNORM_THREADS if set), at least 1
    """
    threads = int(requested) if requested else (os.cpu_count() or 1)
    cap = os.environ.get(THREADS_ENV, "").strip()
    if cap:
        try:
            threads = min(threads, int(cap))
        except ValueError:
            logger.warning("ignoring non-integer %s=%r", THREADS_ENV, cap)
    return max(threads, 1)


def parallel_map(
    func: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None
) -> List[R]:
    """
    Apply ``func`` to every item, results in input order.

    Runs inline when the budget is a single thread. The first exception
    raised by a task propagates after the pool shuts down.
    """
    work = list(items)
    budget = min(thread_budget(threads), max(len(work), 1))
    if budget == 1:
        return [func(item) for item in work]
    logger.debug("parallel_map: %d tasks on %d threads", len(work), budget)
    with ThreadPoolExecutor(max_workers=budget) as pool:
        return list(pool.map(func, work))
