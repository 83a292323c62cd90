"""Independent reference implementations used only by the tests.

Nothing here imports gcdb_lab; each oracle follows the bare definition.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np


def gcd_b_brute(r: int, s: int, b: int) -> int:
    return max(k for k in range(1, r + 1) if r % k == 0 and s % k**b == 0)


def gcd_b_brute_grid(R: int, S: int, b: int) -> np.ndarray:
    """gcd_b on {1..R} x {1..S}: for every k test divisibility, keep the max."""
    r = np.arange(1, R + 1)[:, None]
    s = np.arange(1, S + 1)[None, :]
    out = np.ones((R, S), dtype=np.int64)
    for k in range(2, R + 1):
        kb = k**b
        if kb > S:
            break
        hit = (r % k == 0) & (s % kb == 0)
        out[hit] = k
    return out


def mobius_brute(n: int) -> int:
    sign, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            sign = -sign
        p += 1
    return -sign if m > 1 else sign


def phi_brute(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def components_bfs(bitmap: np.ndarray) -> list[int]:
    """Sorted component sizes of a boolean grid under 4-adjacency."""
    seen = np.zeros_like(bitmap, dtype=bool)
    sizes = []
    R, S = bitmap.shape
    for i in range(R):
        for j in range(S):
            if not bitmap[i, j] or seen[i, j]:
                continue
            seen[i, j] = True
            q = deque([(i, j)])
            n = 0
            while q:
                a, c = q.popleft()
                n += 1
                for da, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                    x, y = a + da, c + dc
                    if 0 <= x < R and 0 <= y < S and bitmap[x, y] and not seen[x, y]:
                        seen[x, y] = True
                        q.append((x, y))
            sizes.append(n)
    return sorted(sizes)
