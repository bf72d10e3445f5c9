"""Deterministic data-parallel map over a process pool.

Work items are dispatched in input order and results reassembled in
input order, so the output is identical for any worker count. Worker
functions must be picklable (module-level functions or partials of
them).
"""

from concurrent.futures import ProcessPoolExecutor


def parallel_map(fn, items, workers: int = 1, chunksize: int | None = None) -> list:
    """Map fn over items, preserving order; workers=1 runs inline."""
    items = list(items)
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    if chunksize is None:
        chunksize = max(1, len(items) // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))


def split_indices(n: int, parts: int) -> list[range]:
    """Split range(n) into at most `parts` contiguous, near-equal ranges."""
    parts = max(1, min(parts, n))
    bounds = [round(i * n / parts) for i in range(parts + 1)]
    return [range(bounds[i], bounds[i + 1]) for i in range(parts) if bounds[i + 1] > bounds[i]]
