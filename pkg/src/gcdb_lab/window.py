"""Sieve-style scans of rectangular lattice windows.

Both scans mark strided sub-grids instead of factoring points one by one:
the admissible k for a point (r, s) are exactly those with k | r and
k**b | s, so walking k upward and stamping the matching rows/columns
leaves the largest admissible k in each cell.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .factor import primes_up_to

__all__ = ["gcd_b_grid", "visibility_bitmap", "default_workers", "row_blocks"]


def default_workers() -> int:
    """Worker count from ``GCDB_LAB_WORKERS`` (defaults to 1)."""
    raw = os.environ.get("GCDB_LAB_WORKERS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"GCDB_LAB_WORKERS must be an integer, got {raw!r}") from None
    return max(1, n)


def row_blocks(rows: int, workers: int) -> list[tuple[int, int]]:
    """Split ``range(rows)`` into at most ``workers`` contiguous half-open blocks."""
    workers = max(1, min(workers, rows))
    edges = np.linspace(0, rows, workers + 1).round().astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def _kmax(r_hi: int, s_hi: int, b: int) -> int:
    # k | r forces k <= r, k**b | s forces k <= s**(1/b)
    root = int(round(s_hi ** (1.0 / b)))
    while root**b > s_hi:
        root -= 1
    while (root + 1) ** b <= s_hi:
        root += 1
    return min(r_hi, root)


def _dtype_for(n: int):
    for dt in (np.uint8, np.uint16, np.uint32):
        if n <= np.iinfo(dt).max:
            return dt
    return np.uint64


def _gcd_block(r0: int, nrows: int, s0: int, ncols: int, b: int) -> np.ndarray:
    r_hi, s_hi = r0 + nrows - 1, s0 + ncols - 1
    kmax = _kmax(r_hi, s_hi, b)
    grid = np.ones((nrows, ncols), dtype=_dtype_for(max(kmax, 1)))
    for k in range(2, kmax + 1):
        kb = k**b
        i0 = (-r0) % k
        j0 = (-s0) % kb
        if i0 < nrows and j0 < ncols:
            grid[i0::k, j0::kb] = k
    return grid


def gcd_b_grid(rows: int, cols: int, b: int, r0: int = 1, s0: int = 1, workers: int = 1) -> np.ndarray:
    """gcd_b(r0 + i, s0 + j) for 0 <= i < rows, 0 <= j < cols.

    Row blocks are filled independently and concatenated in row order, so
    the result does not depend on ``workers``.
    """
    if rows < 1 or cols < 1:
        raise ValueError("window must have at least one row and one column")
    if r0 < 1 or s0 < 1:
        raise ValueError("window must lie in the positive lattice")
    blocks = row_blocks(rows, workers)
    if len(blocks) == 1:
        return _gcd_block(r0, rows, s0, cols, b)
    with ThreadPoolExecutor(len(blocks)) as ex:
        parts = list(ex.map(lambda blk: _gcd_block(r0 + blk[0], blk[1] - blk[0], s0, cols, b), blocks))
    dt = np.result_type(*parts)
    return np.concatenate([p.astype(dt) for p in parts], axis=0)


def _vis_block(r0: int, nrows: int, s0: int, ncols: int, b: int) -> np.ndarray:
    r_hi, s_hi = r0 + nrows - 1, s0 + ncols - 1
    vis = np.ones((nrows, ncols), dtype=bool)
    for p in primes_up_to(_kmax(r_hi, s_hi, b)).tolist():
        pb = p**b
        i0 = (-r0) % p
        j0 = (-s0) % pb
        if i0 < nrows and j0 < ncols:
            vis[i0::p, j0::pb] = False
    return vis


def visibility_bitmap(rows: int, cols: int, b: int, r0: int = 1, s0: int = 1, workers: int = 1) -> np.ndarray:
    """Boolean b-visibility of (r0 + i, s0 + j); only primes need marking."""
    if rows < 1 or cols < 1:
        raise ValueError("window must have at least one row and one column")
    if r0 < 1 or s0 < 1:
        raise ValueError("window must lie in the positive lattice")
    blocks = row_blocks(rows, workers)
    if len(blocks) == 1:
        return _vis_block(r0, rows, s0, cols, b)
    with ThreadPoolExecutor(len(blocks)) as ex:
        parts = list(ex.map(lambda blk: _vis_block(r0 + blk[0], blk[1] - blk[0], s0, cols, b), blocks))
    return np.concatenate(parts, axis=0)
