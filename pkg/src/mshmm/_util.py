"""Small internal helpers."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor


def thread_map(fn, items, threads):
    """Apply ``fn`` over ``items``, preserving order.

    With ``threads <= 1`` this is a plain serial map (the deterministic
    reference ordering).  With more threads the work fans out to a pool but
    results are still assembled in input order, so the reduction any caller
    performs is independent of scheduling.
    """
    items = list(items)
    if threads is None or threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def chunk_indices(count, chunks):
    """Split range(count) into at most ``chunks`` contiguous slices."""
    chunks = max(1, min(chunks or 1, count))
    bounds = [round(count * c / chunks) for c in range(chunks + 1)]
    return [(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
