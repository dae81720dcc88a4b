"""Bounded worker pool for independent computation cells.

Cells are blocking callables; they run on threads through ``asyncio.to_thread``
with at most ``workers`` in flight. Results always come back in submission
order, so any reduction the caller performs is independent of the worker count.
"""

from __future__ import annotations

import asyncio
from typing import Any, Callable, List, Sequence, TypeVar

from latdisc.logger import get_logger

logger = get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")


async def gather_cells(
    fn: Callable[[T], R],
    cells: Sequence[T],
    workers: int = 1,
    return_exceptions: bool = False,
) -> List[Any]:
    """Run ``fn`` over ``cells`` with bounded concurrency, preserving order."""
    if workers < 1:
        raise ValueError(f"workers must be positive, got {workers}")
    semaphore = asyncio.Semaphore(workers)

    async def run_one(cell: T) -> R:
        async with semaphore:
            return await asyncio.to_thread(fn, cell)

    tasks = [run_one(cell) for cell in cells]
    return await asyncio.gather(*tasks, return_exceptions=return_exceptions)


def run_cells(
    fn: Callable[[T], R],
    cells: Sequence[T],
    workers: int = 1,
    return_exceptions: bool = False,
) -> List[Any]:
    """Synchronous front end to :func:`gather_cells`.

    ``workers=1`` evaluates inline without an event loop.
    """
    if workers < 1:
        raise ValueError(f"workers must be positive, got {workers}")
    if workers == 1:
        results: List[Any] = []
        for cell in cells:
            try:
                results.append(fn(cell))
            except Exception as e:
                if not return_exceptions:
                    raise
                results.append(e)
        return results

    logger.debug(f"Dispatching {len(cells)} cells over {workers} workers")
    return asyncio.run(
        gather_cells(fn, cells, workers=workers, return_exceptions=return_exceptions)
    )
