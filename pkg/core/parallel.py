"""
Thread-pool helpers whose results are ordered by input index.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor

logger = logging.getLogger(__name__)


def resolve_threads(threads):
    """0 (or None) means one worker per available CPU."""
    if not threads:
        return max(1, os.cpu_count() or 1)
    return max(1, int(threads))


def ordered_map(func, items, threads=1):
    """
    Apply `func` to every item and return the results in input order.

    With a single thread the work runs inline, which keeps tracebacks simple.
    """
    items = list(items)
    workers = min(resolve_threads(threads), max(1, len(items)))
    if workers == 1:
        return [func(item) for item in items]

    logger.debug(f'Running {len(items)} tasks on {workers} threads')
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
