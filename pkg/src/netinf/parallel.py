"""Order-preserving parallel map for independent work units."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def pmap(fn: Callable[[T], R], items: Sequence[T], threads: int = 1) -> list[R]:
    """Apply ``fn`` to every item, in order, optionally on a thread pool.

    Results are collected by item index, so the output does not depend on
    the number of workers.  Each item must carry its own RNG stream (if
    any); ``fn`` must not touch shared mutable state.
    """
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
