"""Window statistics over T_N = {1..N} x {1..N} and the gcd_b rectangle sums.

Square windows serve mean values and densities; the rectangle
{1..x} x {1..x**b} serves the average of gcd_b. The two geometries are
kept in separate functions and never mixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Union

import numpy as np

from . import arith
from .arith import ArithTable, gcd_b, zeta
from .window import gcd_b_grid

__all__ = [
    "WindowStats",
    "SphereAverage",
    "ZetaLambdaEstimate",
    "AvgGcdComparison",
    "PhiPartialSum",
    "PointFunction",
    "lambda_f_sum_naive",
    "lambda_f_naive_prefix",
    "lambda_f_sum_fast",
    "mean_value_estimate",
    "window_gcd_grid",
    "gcd_b_distribution",
    "gcd_b_count",
    "density_estimate",
    "set_density_estimate",
    "norm_b",
    "same_b_curve",
    "d_b",
    "lambda_f_point_function",
    "sphere_average",
    "zeta_Lambda_estimate",
    "avg_gcd_b_exact",
    "avg_gcd_b_scan",
    "avg_gcd_b_main_term",
    "avg_gcd_1_main_term",
    "avg_gcd_1_square_main_term",
    "compare_avg_gcd",
    "phi_partial_sum",
    "MIN_SPHERE_POINTS",
    "DEFAULT_TRUNCATION_K",
]

MIN_SPHERE_POINTS = 30
DEFAULT_TRUNCATION_K = 100

Number = Union[int, float, Fraction]
# vectorized point function: (r, s) integer arrays of equal shape -> array
PointFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass
class WindowStats:
    """Accumulated window sum with its analytic target."""

    op: str
    b: int
    N: int
    raw_sum: Number
    estimate: float
    target: float
    abs_error: float = field(init=False)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.abs_error = abs(self.estimate - self.target)

    def to_record(self) -> dict:
        rec = {
            "op": self.op,
            "b": self.b,
            "N": self.N,
            "raw_sum": _jsonable(self.raw_sum),
            "estimate": self.estimate,
            "target": self.target,
            "abs_error": self.abs_error,
        }
        rec.update({k: _jsonable(v) for k, v in self.extra.items()})
        return rec


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


def _ratio(num: Number, den: int) -> float:
    if isinstance(num, (int, Fraction)):
        return float(Fraction(num, den)) if isinstance(num, int) else float(num / den)
    return num / den


def _exact_sum(values: np.ndarray) -> Number:
    if np.issubdtype(values.dtype, np.integer):
        return int(values.astype(object).sum()) if values.size else 0
    if np.iscomplexobj(values):
        return complex(math.fsum(values.real), math.fsum(values.imag))
    return math.fsum(values.ravel())


# -- Lambda_f sums -----------------------------------------------------------


def lambda_f_sum_naive(f: ArithTable, b: int, N: int) -> Number:
    """Sum of f(gcd_b(r, s)) over T_N, one gcd_b call per point."""
    if f.N < N:
        raise ValueError(f"f is tabulated to {f.N}, window needs {N}")
    vals = f.values
    if f.is_integer:
        total = 0
        for r in range(1, N + 1):
            for s in range(1, N + 1):
                total += int(vals[gcd_b(r, s, b)])
        return total
    return math.fsum(vals[gcd_b(r, s, b)] for r in range(1, N + 1) for s in range(1, N + 1))


def lambda_f_naive_prefix(f: ArithTable, b: int, N: int) -> list[Number]:
    """[q_1, ..., q_N] by the naive rule, one gcd_b call per point of T_N.

    T_n grows from T_{n-1} by row n and column n, so every point is
    evaluated once for the whole schedule.
    """
    if f.N < N:
        raise ValueError(f"f is tabulated to {f.N}, window needs {N}")
    vals = f.values
    conv = int if f.is_integer else (lambda v: v)
    out: list[Number] = []
    total: Number = 0
    for n in range(1, N + 1):
        new = [conv(vals[gcd_b(n, s, b)]) for s in range(1, n + 1)]
        new += [conv(vals[gcd_b(r, n, b)]) for r in range(1, n)]
        total = total + (sum(new) if f.is_integer else math.fsum(new))
        out.append(total)
    return out


def lambda_f_sum_fast(f: ArithTable, b: int, N: int, g: ArithTable | None = None) -> Number:
    """q_N = sum_k (f*mu)(k) floor(N/k) floor(N/k**b).

    Only k with k**b <= N contribute. Pass ``g`` to reuse a convolution
    computed on a table of bound >= N.
    """
    if f.N < N:
        raise ValueError(f"f is tabulated to {f.N}, window needs {N}")
    if g is None:
        fN = f.truncate(N)
        g = arith.dirichlet_convolve(fN, arith.mobius_sieve(N))
    terms = []
    k = 1
    while k <= N and k**b <= N:
        gk = g.values[k]
        if gk:
            terms.append((gk.item() if isinstance(gk, np.generic) else gk) * (N // k) * (N // k**b))
        k += 1
    if f.is_integer:
        return int(sum(terms))
    if any(isinstance(t, complex) for t in terms):
        return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    return math.fsum(terms)


def mean_value_estimate(f: ArithTable, b: int, N: int, zeta_tail: float = 1e-12) -> WindowStats:
    """Window mean of Lambda_f over T_N against zeta_f(b+1)/zeta(b+1).

    The target series runs over the whole table of ``f`` (which may extend
    past N). Flags are attached, never raised, when the decay condition or
    the absolute-convergence plateau fails.
    """
    q = lambda_f_sum_fast(f, b, N)
    zf = arith.zeta_f(f, b + 1)
    target = zf.value / zeta(b + 1, zeta_tail).value
    cond = arith.mean_value_condition_diagnostic(f)
    extra = {
        "f": f.name,
        "condition_decreasing": cond.decreasing,
        "condition_slope": cond.slope,
        "series_plateau": zf.plateau,
        "provenance": "q_N = sum g(k) floor(N/k) floor(N/k^b); target zeta_f(b+1)/zeta(b+1)",
    }
    est = _ratio(q, N * N)
    if isinstance(target, complex) or isinstance(est, complex):
        # complex-valued f: report the modulus of the deviation
        ws = WindowStats("mean_value", b, N, q, abs(est), abs(target), extra=extra)
        ws.abs_error = abs(est - target)
        return ws
    return WindowStats("mean_value", b, N, q, est, target, extra=extra)


# -- gcd_b distribution --------------------------------------------------------


@lru_cache(maxsize=2)
def _cached_grid(N: int, b: int) -> np.ndarray:
    grid = gcd_b_grid(N, N, b)
    grid.flags.writeable = False
    return grid


def window_gcd_grid(b: int, N: int, workers: int = 1) -> np.ndarray:
    """gcd_b over T_N; row i, column j holds gcd_b(i+1, j+1). Read-only."""
    if N < 1:
        raise ValueError("window size N must be >= 1")
    if workers > 1:
        grid = gcd_b_grid(N, N, b, workers=workers)
        grid.flags.writeable = False
        return grid
    return _cached_grid(N, b)


def gcd_b_distribution(b: int, N: int, workers: int = 1) -> np.ndarray:
    """counts[k] = |{(r, s) in T_N : gcd_b(r, s) = k}| for 0 <= k <= N."""
    grid = window_gcd_grid(b, N, workers)
    return np.bincount(grid.ravel(), minlength=N + 1)[: N + 1].astype(np.int64)


def gcd_b_count(b: int, k: int, N: int, workers: int = 1) -> int:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > N:
        return 0
    return int(gcd_b_distribution(b, N, workers)[k])


def density_estimate(b: int, k: int, N: int, workers: int = 1) -> WindowStats:
    """Share of T_N with gcd_b = k against 1/(k**(b+1) zeta(b+1))."""
    count = gcd_b_count(b, k, N, workers)
    target = 1.0 / (k ** (b + 1) * zeta(b + 1).value)
    return WindowStats(
        "density",
        b,
        N,
        count,
        _ratio(count, N * N),
        target,
        extra={"k": k, "provenance": "window scan of gcd_b; target 1/(k^(b+1) zeta(b+1))"},
    )


def set_density_estimate(
    b: int,
    S: Iterable[int] | Callable[[int], bool],
    N: int,
    K: int | None = None,
    workers: int = 1,
) -> WindowStats:
    """Share of T_N whose gcd_b falls in S, against zeta_S(b+1)/zeta(b+1).

    ``S`` is a finite collection or a membership predicate. With a
    predicate the target series is cut at ``K`` (default max(N, 10**5))
    and the tail bound sum_{k>K} k**-(b+1) <= K**-b / b is recorded.
    """
    counts = gcd_b_distribution(b, N, workers)
    zb = zeta(b + 1).value
    if callable(S):
        pred = S
        K = max(N, 10**5) if K is None else K
        ks = np.arange(1, K + 1)
        member = np.fromiter((bool(pred(int(k))) for k in ks), dtype=bool, count=K)
        zS = math.fsum((ks[member].astype(float)) ** (-(b + 1)))
        tail = K ** (-b) / b
        in_window = member[:N]
    else:
        elems = sorted({int(k) for k in S})
        if any(k < 1 for k in elems):
            raise ValueError("S must contain positive integers only")
        zS = math.fsum(float(k) ** (-(b + 1)) for k in elems)
        tail = 0.0
        in_window = np.zeros(N, dtype=bool)
        for k in elems:
            if k <= N:
                in_window[k - 1] = True
    count = int(counts[1:][in_window].sum())
    return WindowStats(
        "set_density",
        b,
        N,
        count,
        _ratio(count, N * N),
        zS / zb,
        extra={"series_tail_bound": tail / zb, "truncation_K": K},
    )


# -- the d_b metric ------------------------------------------------------------


def _point(A) -> tuple[int, int]:
    r, s = (int(A[0]), int(A[1]))
    if (r, s) == (0, 0):
        return r, s
    if r < 1 or s < 1:
        raise arith.InvalidPoint(f"{(r, s)} is neither the origin nor a point of the positive lattice")
    return r, s


def norm_b(A, b: int) -> int:
    """||A||_b: gcd_b for a lattice point, 0 for the origin."""
    r, s = _point(A)
    if r == 0:
        return 0
    return gcd_b(r, s, b)


def same_b_curve(A, B, b: int) -> bool:
    """Whether A and B reduce to the same b-visible point (exact integer test)."""
    r1, s1 = _point(A)
    r2, s2 = _point(B)
    if r1 == 0 or r2 == 0:
        raise arith.InvalidPoint("b-curves are defined for nonzero points only")
    n1, n2 = gcd_b(r1, s1, b), gcd_b(r2, s2, b)
    return r1 * n2 == r2 * n1 and s1 * n2**b == s2 * n1**b


def d_b(A, B, b: int) -> int:
    nA, nB = norm_b(A, b), norm_b(B, b)
    if nA == 0 or nB == 0:
        return nA + nB
    if same_b_curve(A, B, b):
        return abs(nB - nA)
    return nA + nB


# -- spheres and the Dirichlet series of a point function ------------------------


def lambda_f_point_function(f: ArithTable, b: int) -> PointFunction:
    """Lambda_f as a vectorized point function (scalar gcd_b per point)."""

    def fn(r: np.ndarray, s: np.ndarray) -> np.ndarray:
        g = np.vectorize(lambda x, y: gcd_b(int(x), int(y), b), otypes=[np.int64])(r, s)
        return f.values[g]

    return fn


def _window_values(lam: PointFunction, N: int) -> np.ndarray:
    r, s = np.meshgrid(np.arange(1, N + 1), np.arange(1, N + 1), indexing="ij")
    vals = np.asarray(lam(r, s))
    if vals.shape != (N, N):
        raise ValueError(f"point function returned shape {vals.shape}, expected {(N, N)}")
    return vals


@dataclass(frozen=True)
class SphereAverage:
    """Mean of a point function on the points of T_N with gcd_b = k.

    ``mean`` is None when fewer than ``MIN_SPHERE_POINTS`` points are
    available; check ``sufficient`` before using it.
    """

    b: int
    k: int
    N: int
    count: int
    total: Number
    mean: float | None

    @property
    def sufficient(self) -> bool:
        return self.mean is not None

    def to_record(self) -> dict:
        return {
            "op": "sphere_average",
            "b": self.b,
            "k": self.k,
            "N": self.N,
            "count": self.count,
            "estimate": self.mean,
            "status": "ok" if self.sufficient else "insufficient sample",
        }


def _sphere_sums(vals: np.ndarray, grid: np.ndarray, K: int) -> tuple[np.ndarray, list]:
    flat_k = grid.ravel()
    flat_v = vals.ravel()
    order = np.argsort(flat_k, kind="stable")
    sk = flat_k[order]
    sv = flat_v[order]
    counts = np.bincount(sk, minlength=K + 1)[: K + 1]
    starts = np.searchsorted(sk, np.arange(K + 2))
    totals = []
    for k in range(K + 1):
        chunk = sv[starts[k] : starts[k + 1]]
        totals.append(_exact_sum(chunk) if k else 0)
    return counts, totals


def sphere_average(
    lam: PointFunction,
    b: int,
    k: int,
    N: int,
    min_points: int = MIN_SPHERE_POINTS,
    values: np.ndarray | None = None,
) -> SphereAverage:
    """Average of ``lam`` over T_{N,b,k}. ``values`` may carry lam on T_N precomputed."""
    if k < 1:
        raise ValueError("sphere radius k must be >= 1")
    grid = window_gcd_grid(b, N)
    vals = _window_values(lam, N) if values is None else values
    mask = grid == k
    count = int(mask.sum())
    total = _exact_sum(vals[mask]) if count else 0
    mean = _ratio(total, count) if count >= min_points else None
    return SphereAverage(b, k, N, count, total, mean)


@dataclass(frozen=True)
class ZetaLambdaEstimate:
    """Truncated sum_k M_{b,k}/k**(b+1) with an explicit error budget."""

    b: int
    N: int
    K: int
    value: float
    error_bound: float
    dropped: tuple[int, ...]
    direct: float
    sphere_counts: tuple[int, ...]

    def to_record(self) -> dict:
        return {
            "op": "zeta_Lambda",
            "b": self.b,
            "N": self.N,
            "K": self.K,
            "estimate": self.value,
            "error_bound": self.error_bound,
            "direct_cross_check": self.direct,
            "dropped_spheres": list(self.dropped),
        }


def zeta_Lambda_estimate(
    lam: PointFunction,
    b: int,
    N: int,
    K: int = DEFAULT_TRUNCATION_K,
    bound: float = 1.0,
    min_points: int = MIN_SPHERE_POINTS,
) -> ZetaLambdaEstimate:
    """Estimate zeta_{Lambda,b}(b+1) from sphere averages on T_N.

    ``bound`` is the caller's C with |Lambda| <= C. Spheres with fewer than
    ``min_points`` points are dropped and each adds C/k**(b+1) to the error
    bound, on top of the truncation tail C * K**-b / b. ``direct`` is the
    plain window mean times zeta(b+1), for cross-checking.
    """
    if K < 1:
        raise ValueError("truncation K must be >= 1")
    grid = window_gcd_grid(b, N)
    vals = _window_values(lam, N)
    Kc = min(K, N)
    counts, totals = _sphere_sums(vals, grid, Kc)
    terms, dropped = [], []
    err = bound * K ** (-b) / b
    for k in range(1, K + 1):
        c = int(counts[k]) if k <= Kc else 0
        if c < min_points:
            dropped.append(k)
            err += bound / k ** (b + 1)
            continue
        terms.append(_ratio(totals[k], c) / k ** (b + 1))
    zb = zeta(b + 1).value
    direct = _ratio(_exact_sum(vals), N * N) * zb
    return ZetaLambdaEstimate(b, N, K, math.fsum(terms), err, tuple(dropped), direct, tuple(int(c) for c in counts[1:]))


# -- average of gcd_b over the rectangle {1..x} x {1..x**b} ------------------------


def avg_gcd_b_exact(b: int, x: int) -> int:
    """sum_{d <= x} phi(d) floor(x/d) floor(x**b/d**b); Python ints, no overflow."""
    if b < 1 or x < 1:
        raise ValueError("need b >= 1 and x >= 1")
    phi = arith.phi_sieve(x).values
    xb = x**b
    return sum(int(phi[d]) * (x // d) * (xb // d**b) for d in range(1, x + 1))


def avg_gcd_b_scan(b: int, x: int, workers: int = 1) -> int:
    """Same rectangle sum by sieving gcd_b over every point."""
    grid = gcd_b_grid(x, x**b, b, workers=workers)
    return int(grid.sum(dtype=np.int64))


def avg_gcd_b_main_term(b: int, x: float) -> float:
    """x**(b+1) zeta(b)/zeta(b+1) for b >= 2.

    The error is O(x**2 log x) for b = 2 and O(x**b) for b > 2.
    """
    if b < 2:
        raise ValueError("b = 1 has its own main term: use avg_gcd_1_main_term")
    return x ** (b + 1) * zeta(b).value / zeta(b + 1).value


def avg_gcd_1_main_term(x: float, gamma: float = arith.EULER_GAMMA, zeta_prime_2: float = arith.ZETA_PRIME_2) -> float:
    """(x**2/zeta(2)) (log x + 2 gamma - 1/2 - zeta'(2)/zeta(2)).

    Error term is O(x**(1+theta+eps)) with theta the divisor-problem
    exponent (see ``arith.DIVISOR_THETA_BOUNDS``). Measured against the
    full square sum this expression runs high by x**2/2; see
    :func:`avg_gcd_1_square_main_term`.
    """
    if x < 2:
        raise ValueError("main term needs x >= 2")
    z2 = zeta(2).value
    return x * x / z2 * (math.log(x) + 2 * gamma - 0.5 - zeta_prime_2 / z2)


def avg_gcd_1_square_main_term(x: float, gamma: float = arith.EULER_GAMMA, zeta_prime_2: float = arith.ZETA_PRIME_2) -> float:
    """Main term for sum_{r, s <= x} gcd(r, s) including the -x**2/2 term."""
    return avg_gcd_1_main_term(x, gamma, zeta_prime_2) - x * x / 2


@dataclass(frozen=True)
class AvgGcdComparison:
    b: int
    x: int
    exact: int
    main: float

    @property
    def ratio(self) -> float:
        return self.exact / self.main

    @property
    def rel_error(self) -> float:
        return abs(self.ratio - 1)

    def to_record(self) -> dict:
        return {
            "op": "avg_gcd",
            "b": self.b,
            "x": self.x,
            "exact": str(self.exact),
            "main_term": self.main,
            "ratio": self.ratio,
            "rel_error": self.rel_error,
        }


def compare_avg_gcd(b: int, x: int) -> AvgGcdComparison:
    main = avg_gcd_1_main_term(x) if b == 1 else avg_gcd_b_main_term(b, x)
    return AvgGcdComparison(b, x, avg_gcd_b_exact(b, x), main)


@dataclass(frozen=True)
class PhiPartialSum:
    alpha: float
    x: int
    exact: float
    asymptotic: float

    @property
    def difference(self) -> float:
        return self.exact - self.asymptotic


def phi_partial_sum(alpha: float, x: int, phi: ArithTable | None = None) -> PhiPartialSum:
    """sum_{n <= x} phi(n)/n**alpha and its asymptotic evaluation.

    alpha = 2: (log x + gamma)/zeta(2) - A with A = zeta'(2)/zeta(2)**2.
    alpha != 2: zeta(alpha-1)/zeta(alpha) + x**(2-alpha)/((2-alpha) zeta(2)),
    which needs alpha > 2 for the zeta ratio to make sense.
    """
    if alpha <= 1:
        raise ValueError(f"alpha must exceed 1, got {alpha}")
    if x < 1:
        raise ValueError("x must be >= 1")
    phi = arith.phi_sieve(x) if phi is None else phi.truncate(x)
    n = np.arange(1, x + 1, dtype=float)
    exact = math.fsum(phi.values[1:] / n**alpha)
    z2 = zeta(2).value
    if alpha == 2:
        A = arith.ZETA_PRIME_2 / z2**2
        asym = math.log(x) / z2 + arith.EULER_GAMMA / z2 - A
    else:
        if alpha <= 2:
            raise ValueError("the zeta-ratio evaluation needs alpha > 2 (zeta(alpha-1) must converge)")
        asym = zeta(alpha - 1).value / zeta(alpha).value + x ** (2 - alpha) / ((2 - alpha) * z2)
    return PhiPartialSum(float(alpha), x, exact, asym)
