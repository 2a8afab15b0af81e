"""Chunked, optionally threaded exhaustive enumeration over ``(Z/m)^r``.

Points are numbered in lexicographic order (first coordinate most
significant, values ``0..m-1``). Every search reports the *smallest* failing
index, so results do not depend on chunking or the number of threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

from .errors import BudgetExceeded

DEFAULT_BUDGET = 2**24
CHUNK = 1 << 14

ChunkFn = Callable[[int, int], "int | None"]


def check_budget(needed: int, budget: int | None) -> None:
    """``budget=None`` means unlimited (the ``--force`` flag)."""
    if budget is not None and needed > budget:
        raise BudgetExceeded(needed, budget)


def dtype_for(m: int, width: int = 1):
    """int64 when ``width`` products of residues cannot overflow, else object."""
    return np.int64 if width * (m - 1) ** 2 < 2**62 else object


def digits(start: int, stop: int, m: int, r: int, dtype=np.int64) -> np.ndarray:
    """Coordinates of points ``start..stop-1`` as a ``(stop-start, r)`` array."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((stop - start, r), dtype=np.int64)
    for p in range(r - 1, -1, -1):
        out[:, p] = idx % m
        idx //= m
    return out if dtype is np.int64 else out.astype(object)


def first_failure(total: int, chunk_fn: ChunkFn, threads: int = 1, chunk: int = CHUNK) -> int | None:
    """Smallest index in ``[0, total)`` for which ``chunk_fn`` reports a failure.

    ``chunk_fn(start, stop)`` returns the smallest failing index in its range
    or None. Chunks run in order, ``threads`` at a time; the scan stops after
    the first batch containing a failure.
    """
    bounds = [(s, min(s + chunk, total)) for s in range(0, total, chunk)]
    if threads <= 1 or len(bounds) <= 1:
        for s, e in bounds:
            hit = chunk_fn(s, e)
            if hit is not None:
                return hit
        return None
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for b in range(0, len(bounds), threads):
            hits = [h for h in pool.map(lambda se: chunk_fn(*se), bounds[b:b + threads])
                    if h is not None]
            if hits:
                return min(hits)
    return None


def map_ordered(fn: Callable, items: Sequence, threads: int = 1) -> list:
    """``[fn(x) for x in items]``, evaluated on ``threads`` workers."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# --- batched matrix arithmetic over Z/m ----------------------------------------

def upper_index(n: int) -> tuple[np.ndarray, np.ndarray]:
    rows, cols = np.triu_indices(n)
    return rows, cols


def batch_matrices(start: int, stop: int, m: int, n: int, dtype=np.int64) -> np.ndarray:
    """Matrices ``start..stop-1`` of T_n(Z/m) in lexicographic entry order."""
    rows, cols = upper_index(n)
    d = digits(start, stop, m, len(rows), dtype)
    out = np.zeros((stop - start, n, n), dtype=d.dtype)
    out[:, rows, cols] = d
    return out


def batch_scalar_subst(coeffs: Sequence[int], c: np.ndarray, m: int) -> np.ndarray:
    """``sum_k f_k C^k mod m`` for a batch of matrices (Horner)."""
    n = c.shape[-1]
    eye = np.eye(n, dtype=np.int64).astype(c.dtype)
    res = np.zeros_like(c)
    for a in reversed(coeffs):
        res = (res @ c + a * eye) % m
    return res


def batch_subst(coeffs: Sequence[np.ndarray], c: np.ndarray, m: int, side: str) -> np.ndarray:
    """Right (``sum F_k C^k``) or left (``sum C^k F_k``) substitution mod m."""
    res = np.zeros_like(c)
    for F in reversed(coeffs):
        F = F.astype(c.dtype)
        res = (res @ c + F) % m if side == "right" else (c @ res + F) % m
    return res


def first_true(mask: np.ndarray) -> int | None:
    hits = np.flatnonzero(mask)
    return int(hits[0]) if hits.size else None
