# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

"""Ordered fan-out of independent chunks over a process pool."""

import logging
from multiprocessing import Pool
from typing import Callable, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def split_range(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    """Splits [lo, hi) into at most ``parts`` contiguous, non-empty, ordered ranges."""
    total = hi - lo
    if total <= 0:
        return []
    parts = max(1, min(parts, total))
    step, extra = divmod(total, parts)
    ranges = []
    start = lo
    for index in range(parts):
        end = start + step + (1 if index < extra else 0)
        ranges.append((start, end))
        start = end
    return ranges


def run_chunks(func: Callable[[T], R], chunks: Sequence[T], workers: int) -> list[R]:
    """Applies ``func`` to every chunk and returns the results in chunk order.

    With a single worker, or a single chunk, everything runs in this process; otherwise
    a multiprocessing pool is used. ``func`` must be a module level callable.
    """
    if workers <= 1 or len(chunks) <= 1:
        return [func(chunk) for chunk in chunks]
    logger.debug("Dispatching %d chunks to %d workers", len(chunks), workers)
    with Pool(min(workers, len(chunks))) as pool:
        return pool.map(func, chunks)
