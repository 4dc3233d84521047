"""Thread-pool helpers for grid scans.

Scans are numpy-vectorised; large ones are additionally chunked across a
thread pool (ufuncs release the GIL).  The pool size is capped by the
``CVBELL_THREADS`` environment variable and defaults to the machine's
CPU count.  Chunks are reassembled in order, so results never depend on
scheduling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

__all__ = ["worker_count", "chunked_rows"]

#: below this many grid cells the pool overhead is not worth paying
PARALLEL_THRESHOLD = 65536


def worker_count() -> int:
    """Scan parallelism: CVBELL_THREADS if set (>= 1), else CPU count."""
    raw = os.environ.get("CVBELL_THREADS")
    if raw is not None:
        try:
            n = int(raw)
        except ValueError as exc:
            raise ValueError(
                f"CVBELL_THREADS must be an integer, got {raw!r}") from exc
        if n < 1:
            raise ValueError(f"CVBELL_THREADS must be >= 1, got {n}")
        return n
    return os.cpu_count() or 1


def chunked_rows(row_block: Callable[[int, int], np.ndarray], n_rows: int,
                 n_cols: int, workers: int | None = None) -> np.ndarray:
    """Evaluate ``row_block(lo, hi)`` over contiguous row ranges.

    ``row_block`` must return the block of rows [lo, hi); blocks are
    stacked in order.  Runs serially when the grid is small or a single
    worker is requested.
    """
    w = worker_count() if workers is None else max(1, int(workers))
    w = min(w, n_rows)
    if w <= 1 or n_rows * n_cols < PARALLEL_THRESHOLD:
        return row_block(0, n_rows)
    bounds = []
    base, extra = divmod(n_rows, w)
    lo = 0
    for i in range(w):
        hi = lo + base + (1 if i < extra else 0)
        bounds.append((lo, hi))
        lo = hi
    with ThreadPoolExecutor(max_workers=w) as pool:
        blocks = list(pool.map(lambda b: row_block(*b), bounds))
    return np.concatenate(blocks, axis=0)
