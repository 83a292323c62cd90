"""Prime sieves and integer factorization for arbitrary-precision inputs.

Trial division runs against a cached prime table; numbers too large for
int64 are reduced limb by limb so the division test stays vectorized.
Whatever survives trial division is split with Pollard-Brent under a
wall-clock budget.
"""

from __future__ import annotations

import math
import random
import time
from functools import lru_cache

import numpy as np
from sympy import isprime

__all__ = [
    "FactorizationTimeout",
    "primes_up_to",
    "is_prime",
    "trial_divide",
    "factorize",
    "next_prime",
]

DEFAULT_TRIAL_BOUND = 10**7

_LIMB_BITS = 16
_LIMB_MASK = (1 << _LIMB_BITS) - 1
_INT64_SAFE = 1 << 62


class FactorizationTimeout(RuntimeError):
    """Raised when a composite cofactor could not be split within budget."""

    def __init__(self, n: int, budget_s: float):
        super().__init__(f"could not factor {n} within {budget_s:g}s")
        self.n = n
        self.budget_s = budget_s


@lru_cache(maxsize=8)
def primes_up_to(bound: int) -> np.ndarray:
    """All primes p <= bound as a read-only int64 array (Eratosthenes)."""
    if bound < 2:
        out = np.zeros(0, dtype=np.int64)
        out.flags.writeable = False
        return out
    sieve = np.ones(bound + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for i in range(3, math.isqrt(bound) + 1, 2):
        if sieve[i]:
            sieve[i * i :: 2 * i] = False
    out = np.flatnonzero(sieve).astype(np.int64)
    out.flags.writeable = False
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and bool(isprime(n))


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    m = n + 1
    while not is_prime(m):
        m += 1
    return m


def _residues(n: int, primes: np.ndarray) -> np.ndarray:
    """n mod p for every p in primes, valid for arbitrarily large n."""
    if n < _INT64_SAFE:
        return np.int64(n) % primes
    limbs = []
    while n:
        limbs.append(n & _LIMB_MASK)
        n >>= _LIMB_BITS
    r = np.zeros_like(primes)
    # primes < 2**31 keeps r << 16 inside int64
    for limb in reversed(limbs):
        r = ((r << _LIMB_BITS) + limb) % primes
    return r


def trial_divide(n: int, bound: int = DEFAULT_TRIAL_BOUND) -> tuple[dict[int, int], int, bool]:
    """Strip every prime factor p <= bound from n.

    Returns ``(factors, cofactor, complete)``. ``complete`` is True when the
    cofactor is 1 or provably prime (no factor up to ``bound`` and
    ``cofactor < bound**2``).
    """
    if n < 1:
        raise ValueError(f"trial_divide needs n >= 1, got {n}")
    factors: dict[int, int] = {}
    if n == 1:
        return factors, 1, True
    if bound >= 2**31:
        raise ValueError("trial bound must stay below 2**31")
    primes = primes_up_to(bound)
    limit = math.isqrt(n)
    if limit < bound:
        primes = primes[: np.searchsorted(primes, limit, side="right")]
    if n < 1000 and len(primes) < 12:
        hits = [int(p) for p in primes if n % int(p) == 0]
    else:
        hits = [int(p) for p in primes[_residues(n, primes) == 0]]
    for p in hits:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        factors[p] = e
    if n == 1:
        return factors, 1, True
    complete = n < bound * bound or limit < bound
    if complete:
        factors[n] = factors.get(n, 0) + 1
        return factors, 1, True
    return factors, n, False


def _pollard_brent(n: int, deadline: float, rng: random.Random) -> int | None:
    if n % 2 == 0:
        return 2
    while time.monotonic() < deadline:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
            if time.monotonic() > deadline:
                return None
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    return None


def factorize(
    n: int,
    trial_bound: int = 10**5,
    budget_s: float = 30.0,
    seed: int = 0,
) -> dict[int, int]:
    """Full prime factorization of n >= 1.

    Trial division to ``trial_bound`` first, then Pollard-Brent on the
    remaining composite part. Raises :class:`FactorizationTimeout` carrying
    the offending integer when ``budget_s`` runs out.
    """
    factors, rest, _ = trial_divide(n, trial_bound)
    if rest == 1:
        return dict(sorted(factors.items()))
    deadline = time.monotonic() + budget_s
    rng = random.Random(seed)
    stack = [rest]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        root = math.isqrt(m)
        if root * root == m:
            stack += [root, root]
            continue
        d = _pollard_brent(m, deadline, rng)
        if d is None:
            raise FactorizationTimeout(n, budget_s)
        stack += [d, m // d]
    return dict(sorted(factors.items()))
