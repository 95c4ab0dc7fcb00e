"""Deterministic fan-out over a fixed task list.

Results always come back in task order, so worker count changes wall
time but never output.  Task functions must be picklable module-level
callables and tasks must be picklable values.
"""

from __future__ import annotations

import multiprocessing
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def run_tasks(fn: Callable[[T], R], tasks: Sequence[T], workers: int = 1) -> list[R]:
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    ctx = multiprocessing.get_context("fork")
    procs = min(workers, len(tasks))
    chunk = max(1, len(tasks) // (procs * 4))
    with ctx.Pool(procs) as pool:
        return pool.map(fn, tasks, chunksize=chunk)
