"""The graph G_b of b-visible points joined at unit distance.

Edges use the 4-neighbourhood; lonesomeness uses the 8-neighbourhood.
Both radii are explicit below so the two are never confused.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import ndimage

from .arith import gcd_b, is_b_visible, zeta
from .lattice import WindowStats
from .patterns import Realization, realize, ring_pattern
from .window import visibility_bitmap

__all__ = [
    "EDGE_OFFSETS",
    "RING_OFFSETS",
    "KNOWN_LONESOME_POINT",
    "KNOWN_LONESOME_GCDS",
    "visible_neighbor_count",
    "neighbor_count_grid",
    "VisibleNeighborCount",
    "mean_connectivity_estimate",
    "WindowGraph",
    "ComponentStats",
    "window_graph",
    "component_stats",
    "components",
    "LargestComponentReport",
    "largest_component_density",
    "LonesomeResult",
    "ring_gcds",
    "find_lonesome",
    "write_pbm",
    "write_pgm",
]

EDGE_OFFSETS = ((-1, 0), (1, 0), (0, -1), (0, 1))
# order used in the published example: i outer, j inner
RING_OFFSETS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))

KNOWN_LONESOME_POINT = (6001645, 49747967748324)
KNOWN_LONESOME_GCDS = (19, 6, 11, 13, 5, 17, 2, 7)


def visible_neighbor_count(r: int, s: int, b: int) -> int:
    """b-visible points at distance 1; neighbours off the lattice do not count."""
    total = 0
    for dr, ds in EDGE_OFFSETS:
        x, y = r + dr, s + ds
        if x >= 1 and y >= 1 and is_b_visible(x, y, b):
            total += 1
    return total


def neighbor_count_grid(b: int, N: int, workers: int = 1) -> np.ndarray:
    """visible_neighbor_count over T_N as an N x N array (row r-1, column s-1)."""
    vis = visibility_bitmap(N + 1, N + 1, b, workers=workers).astype(np.int8)
    out = np.zeros((N, N), dtype=np.int8)
    out[1:, :] += vis[: N - 1, :N]  # (r-1, s)
    out += vis[1 : N + 1, :N]  # (r+1, s)
    out[:, 1:] += vis[:N, : N - 1]  # (r, s-1)
    out += vis[:N, 1 : N + 1]  # (r, s+1)
    return out


class VisibleNeighborCount:
    """Vectorized point function (r, s) -> number of b-visible 4-neighbours."""

    def __init__(self, b: int):
        self.b = b

    def __call__(self, r: np.ndarray, s: np.ndarray) -> np.ndarray:
        r = np.asarray(r)
        s = np.asarray(s)
        R, S = int(r.max()) + 1, int(s.max()) + 1
        vis = np.zeros((R + 1, S + 1), dtype=np.int8)
        vis[1:, 1:] = visibility_bitmap(R, S, self.b)
        return vis[r - 1, s] + vis[r + 1, s] + vis[r, s - 1] + vis[r, s + 1]


def mean_connectivity_estimate(b: int, N: int, workers: int = 1) -> WindowStats:
    """Mean visible-neighbour count over T_N against 4/zeta(b+1)."""
    if N < 3:
        raise ValueError("connectivity window needs N >= 3")
    total = int(neighbor_count_grid(b, N, workers).sum(dtype=np.int64))
    target = 4.0 / zeta(b + 1).value
    return WindowStats(
        "connectivity",
        b,
        N,
        total,
        total / (N * N),
        target,
        extra={"provenance": "mean 4-neighbour visible count; target 4/zeta(b+1)"},
    )


# -- components -----------------------------------------------------------------------

_FOUR = ndimage.generate_binary_structure(2, 1)


@dataclass(frozen=True)
class WindowGraph:
    """b-visible points of [r0, r1] x [s0, s1] with 4-neighbour edges."""

    b: int
    r0: int
    r1: int
    s0: int
    s1: int
    bitmap: np.ndarray

    @property
    def vertex_count(self) -> int:
        return int(self.bitmap.sum())

    @property
    def edge_count(self) -> int:
        v = self.bitmap
        return int((v[1:, :] & v[:-1, :]).sum() + (v[:, 1:] & v[:, :-1]).sum())

    def labels(self) -> tuple[np.ndarray, int]:
        """Row-major component labels (0 = invisible) and the component count."""
        lab, n = ndimage.label(self.bitmap, structure=_FOUR)
        return lab, int(n)


def window_graph(b: int, r0: int, r1: int, s0: int, s1: int, workers: int = 1) -> WindowGraph:
    if r1 < r0 or s1 < s0:
        raise ValueError("empty window")
    vis = visibility_bitmap(r1 - r0 + 1, s1 - s0 + 1, b, r0=r0, s0=s0, workers=workers)
    return WindowGraph(b, r0, r1, s0, s1, vis)


@dataclass(frozen=True)
class ComponentStats:
    count: int
    visible: int
    area: int
    histogram: dict[int, int]
    largest: int
    touching_boundary: int
    largest_touches_boundary: bool
    window: tuple[int, int, int, int] | None = None
    b: int | None = None

    @property
    def largest_ratio(self) -> float:
        return self.largest / self.visible if self.visible else 0.0

    @property
    def largest_density(self) -> float:
        return self.largest / self.area

    def to_record(self) -> dict:
        return {
            "op": "components",
            "b": self.b,
            "window": list(self.window) if self.window else None,
            "components": self.count,
            "visible": self.visible,
            "largest": self.largest,
            "largest_over_visible": self.largest_ratio,
            "largest_density": self.largest_density,
            "touching_boundary": self.touching_boundary,
            "largest_touches_boundary": self.largest_touches_boundary,
            "size_histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }


def component_stats(bitmap: np.ndarray, window=None, b=None) -> ComponentStats:
    """Connected components (4-neighbourhood) of an arbitrary boolean bitmap."""
    bitmap = np.asarray(bitmap, dtype=bool)
    lab, n = ndimage.label(bitmap, structure=_FOUR)
    sizes = np.bincount(lab.ravel(), minlength=n + 1)[1:]
    edge_labels = np.unique(np.concatenate([lab[0], lab[-1], lab[:, 0], lab[:, -1]]))
    edge_labels = edge_labels[edge_labels > 0]
    hist: dict[int, int] = {}
    if n:
        vals, cnt = np.unique(sizes, return_counts=True)
        hist = {int(a): int(c) for a, c in zip(vals, cnt)}
    largest = int(sizes.max()) if n else 0
    big = int(np.argmax(sizes)) + 1 if n else 0
    return ComponentStats(
        count=n,
        visible=int(sizes.sum()),
        area=bitmap.size,
        histogram=hist,
        largest=largest,
        touching_boundary=int(edge_labels.size),
        largest_touches_boundary=bool(n and big in set(edge_labels.tolist())),
        window=window,
        b=b,
    )


def components(b: int, window: tuple[int, int, int, int], workers: int = 1) -> ComponentStats:
    """Components of G_b restricted to window (r0, r1, s0, s1), inclusive."""
    g = window_graph(b, *window, workers=workers)
    return component_stats(g.bitmap, window, b)


@dataclass(frozen=True)
class LargestComponentReport:
    b: int
    schedule: tuple[int, ...]
    densities: tuple[float, ...]
    ratios: tuple[float, ...]

    @property
    def density(self) -> float:
        return self.densities[-1]

    @property
    def ratio(self) -> float:
        return self.ratios[-1]

    def to_records(self) -> list[dict]:
        return [
            {"op": "largest_component", "b": self.b, "N": N, "estimate": d, "largest_over_visible": q}
            for N, d, q in zip(self.schedule, self.densities, self.ratios)
        ]


def largest_component_density(b: int, N: int, schedule: tuple[int, ...] | None = None, workers: int = 1) -> LargestComponentReport:
    """|largest component in T_N| / N**2 and largest/visible, for each N in the schedule.

    The default schedule halves N down to 100. The raw largest component is
    used even though it may merge with others outside the window.
    """
    if N < 100:
        raise ValueError("largest-component trend needs N >= 100")
    if schedule is None:
        sched = [N]
        while sched[-1] // 2 >= 100:
            sched.append(sched[-1] // 2)
        schedule = tuple(sorted(sched))
    dens, rats = [], []
    for n in schedule:
        st = components(b, (1, n, 1, n), workers)
        dens.append(st.largest_density)
        rats.append(st.largest_ratio)
    return LargestComponentReport(b, tuple(schedule), tuple(dens), tuple(rats))


# -- lonesome points -----------------------------------------------------------------------


def ring_gcds(r: int, s: int, b: int) -> tuple[int, ...]:
    """gcd_b of the eight surrounding points, in RING_OFFSETS order."""
    return tuple(gcd_b(r + i, s + j, b) for i, j in RING_OFFSETS)


@dataclass(frozen=True)
class LonesomeResult:
    b: int
    point: tuple[int, int] | None
    strategy: str
    center_gcd: int | None = None
    neighbor_gcds: tuple[int, ...] | None = None
    realization: Realization | None = None
    window: tuple[int, int, int, int] | None = None

    @property
    def lonesome(self) -> bool:
        return self.point is not None and self.center_gcd == 1 and all(g > 1 for g in self.neighbor_gcds)

    def to_record(self) -> dict:
        rec = {
            "op": "lonesome",
            "b": self.b,
            "strategy": self.strategy,
            "point": None if self.point is None else [str(self.point[0]), str(self.point[1])],
            "center_gcd": self.center_gcd,
            "neighbor_gcds": None if self.neighbor_gcds is None else [str(g) for g in self.neighbor_gcds],
            "lonesome": self.lonesome,
        }
        if self.window is not None:
            rec["window"] = list(self.window)
        if self.realization is not None:
            rec["realization"] = self.realization.to_record()
        return rec


def _scan_lonesome(b: int, window: tuple[int, int, int, int]) -> tuple[int, int] | None:
    r0, r1, s0, s1 = window
    # points on r = 1 or s = 1 have neighbours off the lattice
    r0, s0 = max(r0, 2), max(s0, 2)
    if r1 < r0 or s1 < s0:
        return None
    vis = visibility_bitmap(r1 - r0 + 3, s1 - s0 + 3, b, r0=r0 - 1, s0=s0 - 1)
    core = vis[1:-1, 1:-1].copy()
    nr, ns = core.shape
    for i, j in RING_OFFSETS:
        core &= ~vis[1 + i : 1 + i + nr, 1 + j : 1 + j + ns]
    hit = np.argwhere(core)
    if hit.size == 0:
        return None
    i, j = hit[0]
    return r0 + int(i), s0 + int(j)


def find_lonesome(
    b: int,
    strategy: str = "scan",
    window: tuple[int, int, int, int] = (1, 200, 1, 200),
    point: tuple[int, int] | None = None,
    **realize_kwargs,
) -> LonesomeResult:
    """A b-visible point whose eight surrounding points are all b-invisible.

    ``scan`` searches ``window`` row-major (or just checks ``point`` when
    given) and reports ``point=None`` when nothing qualifies. ``construct``
    realizes the ring pattern (circle at (2, 2), crosses around it) and
    returns its centre.
    """
    if strategy == "scan":
        if point is None:
            point = _scan_lonesome(b, window)
            if point is None:
                return LonesomeResult(b, None, "scan", window=window)
        r, s = point
        return LonesomeResult(b, (r, s), "scan", gcd_b(r, s, b), ring_gcds(r, s, b), window=window)
    if strategy == "construct":
        real = realize(ring_pattern(b), **realize_kwargs)
        r, s = real.u + 2, real.v + 2
        return LonesomeResult(b, (r, s), "construct", gcd_b(r, s, b), ring_gcds(r, s, b), realization=real)
    raise ValueError(f"unknown strategy {strategy!r}; use 'scan' or 'construct'")


# -- bitmap dumps ---------------------------------------------------------------------------


def write_pbm(bitmap: np.ndarray, path: str | Path) -> None:
    """Binary PBM (P4); black = visible. Row 0 of the file is the largest s."""
    img = np.asarray(bitmap, dtype=bool).T[::-1]
    h, w = img.shape
    packed = np.packbits(img, axis=1)
    with open(path, "wb") as fh:
        fh.write(f"P4\n{w} {h}\n".encode())
        fh.write(packed.tobytes())


def write_pgm(labels: np.ndarray, path: str | Path) -> None:
    """16-bit binary PGM (P5) of component labels; labels above 65535 wrap to 1..65535."""
    img = np.asarray(labels, dtype=np.int64).T[::-1]
    h, w = img.shape
    data = np.where(img > 0, (img - 1) % 65535 + 1, 0).astype(">u2")
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n65535\n".encode())
        fh.write(data.tobytes())
