import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

ENV_THREADS = "WAVEPACK_THREADS"


def get_thread_count(threads: Optional[int] = None) -> int:
    """threads > WAVEPACK_THREADS > min(4, cpu count)"""
    if threads is None:
        env = os.environ.get(ENV_THREADS, "").strip()
        if env == "":
            return min(4, os.cpu_count() or 1)
        try:
            threads = int(env)
        except ValueError:
            raise ValueError(f"{ENV_THREADS} must be a positive integer ({env!r})")
    if threads < 1:
        raise ValueError(f"thread count must be a positive integer ({threads})")
    return threads


def parallel_map(func: Callable[[T], R], items: Sequence[T], threads: Optional[int] = None) -> List[R]:
    """func over items on a bounded thread pool. The result order follows items."""
    n = get_thread_count(threads)
    items = list(items)
    if n == 1 or len(items) <= 1:
        return [func(x) for x in items]
    logger.debug(f"parallel_map: {len(items)} items on {n} threads")
    with ThreadPoolExecutor(max_workers=n) as executor:
        return list(executor.map(func, items))
