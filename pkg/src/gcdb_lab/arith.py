"""Exact arithmetic behind every lattice statistic.

gcd_b(r, s) is the largest k with k | r and k**b | s. Everything else in
the package reduces to it, to the Moebius/totient sieves below, and to
zeta values used as analytic targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .factor import factorize

__all__ = [
    "InvalidPoint",
    "ArithTable",
    "ZetaValue",
    "ZetaFResult",
    "ConditionDiagnostic",
    "gcd_b",
    "is_b_visible",
    "unit_table",
    "identity_table",
    "floor_inverse_table",
    "indicator_table",
    "power_table",
    "random_sign_table",
    "mobius_sieve",
    "phi_sieve",
    "dirichlet_convolve",
    "zeta",
    "zeta_f",
    "mean_value_condition_diagnostic",
    "euler_gamma_series",
    "zeta_prime_2_series",
    "EULER_GAMMA",
    "ZETA_PRIME_2",
    "DIVISOR_THETA_BOUNDS",
]


class InvalidPoint(ValueError):
    """A coordinate outside the positive lattice or a bad exponent."""


def _check_point(r: int, s: int, b: int) -> None:
    if r < 1 or s < 1:
        raise InvalidPoint(f"lattice point needs r, s >= 1, got ({r}, {s})")
    if b < 1:
        raise InvalidPoint(f"exponent b must be >= 1, got {b}")


def _valuation(n: int, q: int, cap: int) -> int:
    e = 0
    while e < cap and n % q == 0:
        n //= q
        e += 1
    return e


def gcd_b(r: int, s: int, b: int) -> int:
    """Largest k with ``k | r`` and ``k**b | s``.

    Every admissible k divides gcd(r, s), so only that gcd is factored; the
    exponent of each prime q in the answer is min(v_q(r), v_q(s) // b).

    >>> gcd_b(12, 18, 1), gcd_b(4, 8, 2), gcd_b(2, 2, 2)
    (6, 2, 1)
    """
    r, s, b = int(r), int(s), int(b)
    _check_point(r, s, b)
    g = math.gcd(r, s)
    if g == 1 or b == 1:
        return g
    k = 1
    for q, e in factorize(g).items():
        # need v_q(s) only up to e*b
        f = _valuation(s, q, e * b)
        k *= q ** min(e, f // b)
    return k


def is_b_visible(r: int, s: int, b: int) -> bool:
    return gcd_b(r, s, b) == 1


# -- tables -----------------------------------------------------------------


@dataclass(frozen=True)
class ArithTable:
    """Values f(1..N) of an arithmetic function.

    ``values[n]`` holds f(n); slot 0 is a zero pad so indices match n.
    Integer-valued functions keep an integer dtype and stay exact.
    """

    values: np.ndarray
    name: str = "f"

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim != 1 or len(v) < 2:
            raise ValueError("an ArithTable needs values for at least n = 1")
        v = v.copy()
        v[0] = 0
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def N(self) -> int:
        return len(self.values) - 1

    @property
    def is_integer(self) -> bool:
        return np.issubdtype(self.values.dtype, np.integer)

    def __getitem__(self, n):
        if isinstance(n, (int, np.integer)) and not 1 <= n <= self.N:
            raise IndexError(f"{self.name} is tabulated on 1..{self.N}, not {n}")
        return self.values[n]

    def __len__(self) -> int:
        return self.N

    def as_list(self) -> list:
        return self.values[1:].tolist()

    def truncate(self, N: int) -> "ArithTable":
        if not 1 <= N <= self.N:
            raise ValueError(f"cannot truncate a table on 1..{self.N} to {N}")
        return ArithTable(self.values[: N + 1], self.name)

    @classmethod
    def from_function(cls, N: int, fn: Callable[[int], float], name: str = "f") -> "ArithTable":
        vals = [0] + [fn(n) for n in range(1, N + 1)]
        return cls(np.array(vals), name)

    @classmethod
    def from_values(cls, vals: Sequence, name: str = "f") -> "ArithTable":
        """Build from f(1), f(2), ... (no zero pad)."""
        return cls(np.concatenate([[0], np.asarray(vals)]), name)


def _check_bound(N: int) -> None:
    if N < 1:
        raise ValueError(f"table bound N must be >= 1, got {N}")


def unit_table(N: int) -> ArithTable:
    """u(n) = 1."""
    _check_bound(N)
    return ArithTable(np.ones(N + 1, dtype=np.int64), "unit")


def floor_inverse_table(N: int) -> ArithTable:
    """floor(1/n): 1 at n = 1, 0 elsewhere (the Dirichlet identity e)."""
    _check_bound(N)
    v = np.zeros(N + 1, dtype=np.int64)
    v[1] = 1
    return ArithTable(v, "floor-inverse")


def identity_table(N: int) -> ArithTable:
    """f(n) = n."""
    _check_bound(N)
    return ArithTable(np.arange(N + 1, dtype=np.int64), "identity")


def indicator_table(N: int, k: int) -> ArithTable:
    """f(k) = k and f(n) = 0 otherwise; its mean value is k times the gcd_b = k density."""
    _check_bound(N)
    if not 1 <= k <= N:
        raise ValueError(f"indicator point k={k} outside 1..{N}")
    v = np.zeros(N + 1, dtype=np.int64)
    v[k] = k
    return ArithTable(v, f"indicator-{k}")


def power_table(N: int, e: int) -> ArithTable:
    _check_bound(N)
    return ArithTable(np.arange(N + 1, dtype=np.int64) ** e, f"power-{e}")


def random_sign_table(N: int, seed: int = 0) -> ArithTable:
    """Independent +-1 values from a seeded generator."""
    _check_bound(N)
    rng = np.random.default_rng(seed)
    return ArithTable(rng.choice(np.array([-1, 1], dtype=np.int64), size=N + 1), "random-sign")


def mobius_sieve(N: int) -> ArithTable:
    """mu(n) for n <= N: flip the sign along multiples of each prime, zero multiples of p**2."""
    _check_bound(N)
    mu = np.ones(N + 1, dtype=np.int64)
    mu[0] = 0
    is_comp = np.zeros(N + 1, dtype=bool)
    for p in range(2, N + 1):
        if is_comp[p]:
            continue
        is_comp[2 * p :: p] = True
        mu[p::p] *= -1
        pp = p * p
        if pp <= N:
            mu[pp::pp] = 0
    return ArithTable(mu, "mobius")


def phi_sieve(N: int) -> ArithTable:
    """Euler's totient on 1..N (product formula applied prime by prime).

    The divisor-sum identity sum_{d | n} phi(d) = n is re-checked on
    n <= min(N, 1000) before the table is returned.
    """
    _check_bound(N)
    phi = np.arange(N + 1, dtype=np.int64)
    for p in range(2, N + 1):
        if phi[p] == p:
            phi[p::p] -= phi[p::p] // p
    table = ArithTable(phi, "phi")
    M = min(N, 1000)
    check = dirichlet_convolve(table.truncate(M), unit_table(M))
    if not np.array_equal(check.values[1:], np.arange(1, M + 1)):
        raise AssertionError("totient sieve failed the divisor-sum identity")
    return table


def dirichlet_convolve(f: ArithTable, g: ArithTable) -> ArithTable:
    """(f * g)(n) = sum over d | n of f(d) g(n/d), for n <= N."""
    if f.N != g.N:
        raise ValueError(f"tables have different bounds ({f.N} vs {g.N})")
    N = f.N
    dtype = np.result_type(f.values.dtype, g.values.dtype)
    out = np.zeros(N + 1, dtype=dtype)
    fv, gv = f.values, g.values
    for d in range(1, N + 1):
        if fv[d] == 0:
            continue
        m = N // d
        out[d : d * m + 1 : d] += fv[d] * gv[1 : m + 1]
    return ArithTable(out, f"({f.name}*{g.name})")


# -- zeta values -------------------------------------------------------------

# 2*zeta(3)/(2*pi)**3 rounded up: Euler-Maclaurin remainder constant for p = 3.
_EM3 = 2 * 1.2020569031595943 / (2 * math.pi) ** 3 * (1 + 1e-12)
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ZetaValue:
    s: float
    value: float
    terms_used: int
    tail_bound: float

    def __float__(self) -> float:
        return self.value


def _power_sum(N: int, s: float) -> float:
    n = np.arange(N - 1, 0, -1, dtype=float)
    return math.fsum(n ** (-s))


def zeta(s: float, target_tail: float = 1e-12) -> ZetaValue:
    """Riemann zeta at real s > 1.

    Sums n**-s for n < N and closes the series with the integral tail
    N**(1-s)/(s-1) plus the first two Euler-Maclaurin corrections. The
    remainder is bounded by 2 zeta(3)/(2 pi)**3 * s(s+1) N**(-s-2); N is
    the smallest value (>= 10) that pushes this below ``target_tail``.
    """
    s = float(s)
    if not s > 1:
        raise ValueError(f"zeta series needs s > 1, got {s}")
    if not target_tail > 0:
        raise ValueError("target_tail must be positive")
    floor = 8 * _EPS * 1.7  # relative rounding floor for values near zeta(2)
    goal = max(target_tail, floor)
    N = max(10, math.ceil((_EM3 * s * (s + 1) / goal) ** (1 / (s + 2))))
    head = _power_sum(N, s)
    tail = N ** (1 - s) / (s - 1) + 0.5 * N ** (-s) + s * N ** (-s - 1) / 12
    value = head + tail
    bound = _EM3 * s * (s + 1) * N ** (-s - 2) + 4 * _EPS * value
    return ZetaValue(s, value, N, float(bound))


@dataclass(frozen=True)
class ZetaFResult:
    """Partial Dirichlet series with an absolute-convergence probe."""

    s: float
    value: complex | float
    terms: int
    abs_half: float
    abs_full: float
    plateau: bool


def zeta_f(f: ArithTable, s: float, rel_tol: float = 1e-2) -> ZetaFResult:
    """Partial sum of f(n) n**-s over the table.

    ``plateau`` is set when the absolute series gains less than ``rel_tol``
    (relative) between n <= N/2 and n <= N.
    """
    if not s > 1:
        raise ValueError(f"Dirichlet series evaluated at s={s}; need s > 1")
    N = f.N
    n = np.arange(1, N + 1, dtype=float)
    w = n ** (-float(s))
    terms = f.values[1:] * w
    if np.iscomplexobj(terms):
        value = complex(math.fsum(terms.real), math.fsum(terms.imag))
    else:
        value = math.fsum(terms)
    absterms = np.abs(f.values[1:]).astype(float) * w
    abs_half = math.fsum(absterms[: N // 2])
    abs_full = math.fsum(absterms)
    plateau = abs_full == 0 or (abs_full - abs_half) <= rel_tol * abs_full
    return ZetaFResult(float(s), value, N, abs_half, abs_full, plateau)


@dataclass(frozen=True)
class ConditionDiagnostic:
    """H(M) = (1/M) sum_{k <= M} |(f*mu)(k)|/k on a geometric schedule."""

    schedule: tuple[int, ...]
    values: tuple[float, ...]
    slope: float
    decreasing: bool


def mean_value_condition_diagnostic(f: ArithTable, slope_max: float = -0.25) -> ConditionDiagnostic:
    """Probe whether H(M) tends to 0, the hypothesis of the mean-value theorem.

    The schedule is 1, 2, 4, ... plus N. ``decreasing`` holds when the
    log-log slope of H over the upper half of the schedule is below
    ``slope_max`` (or H vanishes there).
    """
    N = f.N
    g = dirichlet_convolve(f, mobius_sieve(N))
    k = np.arange(1, N + 1, dtype=float)
    running = np.cumsum(np.abs(g.values[1:]).astype(float) / k)
    schedule = []
    M = 1
    while M < N:
        schedule.append(M)
        M *= 2
    schedule.append(N)
    values = [float(running[M - 1] / M) for M in schedule]
    upper = schedule[len(schedule) // 2 :]
    hv = np.array(values[len(schedule) // 2 :])
    if np.all(hv == 0):
        slope = -math.inf
    elif len(upper) < 2 or np.any(hv == 0):
        slope = -math.inf if hv[-1] == 0 else 0.0
    else:
        slope = float(np.polyfit(np.log(upper), np.log(hv), 1)[0])
    return ConditionDiagnostic(tuple(schedule), tuple(values), slope, slope < slope_max)


# -- constants -----------------------------------------------------------------


def euler_gamma_series(n: int = 2000) -> tuple[float, float]:
    """Euler's constant from H_n - log n with Euler-Maclaurin corrections.

    Returns (value, error bound); the omitted term is below 1/(252 n**6).
    """
    H = math.fsum(1.0 / k for k in range(n, 0, -1))
    value = H - math.log(n) - 1 / (2 * n) + 1 / (12 * n**2) - 1 / (120 * n**4)
    return value, 1 / (252 * n**6) + 8 * _EPS


def zeta_prime_2_series(N: int = 20000) -> tuple[float, float]:
    """zeta'(2) = -sum log(n)/n**2, with an Euler-Maclaurin closed tail.

    Returns (value, error bound).
    """
    if N < 3:
        raise ValueError("need N >= 3 so the third derivative keeps one sign")
    n = np.arange(N - 1, 1, -1, dtype=float)
    head = math.fsum(np.log(n) / n**2)
    lg = math.log(N)
    f = lg / N**2
    df = (1 - 2 * lg) / N**3
    d2f = (6 * lg - 5) / N**4
    tail = (lg + 1) / N + f / 2 - df / 12
    bound = _EM3 * abs(d2f) + 8 * _EPS
    return -(head + tail), float(bound)


# Frozen from euler_gamma_series() and zeta_prime_2_series(); tests recompute them.
EULER_GAMMA = 0.5772156649015329
ZETA_PRIME_2 = -0.9375482543158437

# Dirichlet divisor problem exponent: 1/4 <= theta <= 131/416 (Huxley).
# Metadata for the error term of the b = 1 average gcd only.
DIVISOR_THETA_BOUNDS = (0.25, 131 / 416)
