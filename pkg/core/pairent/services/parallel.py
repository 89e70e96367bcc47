"""
Ordered Parallel Map

Thread-pool fan-out whose results come back in input order, so every
parallel computation is independent of scheduling.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from pairent.config import settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(
    fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None
) -> List[R]:
    """
    Apply fn to every item, in parallel when more than one worker is allowed.

    Args:
        fn: Pure function of one item
        items: Inputs; consumed eagerly
        threads: Worker cap (defaults to settings.threads)

    Returns:
        Results in input order
    """
    items = list(items)
    workers = max(1, min(threads or settings.threads, len(items) or 1))
    logger.debug(f"Mapping {len(items)} items on {workers} workers")
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
