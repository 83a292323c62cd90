"""b-patterns: realizability, explicit CRT realizations, and verification.

A b-pattern marks cells (r, s), 1 <= r <= w, 1 <= s <= h <= w**b, as
circle (must be b-visible), cross (must be b-invisible) or blank. It is
realizable iff for no prime p do its circles hit every residue pair of
Z/p x Z/p**b; only p <= w can ever be complete because the circles'
first coordinates take at most w values.

Text format::

    b=2 w=3 h=3
    xxx
    xox
    xxx

The first grid line is the top row s = h; column j is r = j.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from .factor import FactorizationTimeout, factorize, is_prime, next_prime, primes_up_to, trial_divide
from .window import visibility_bitmap

__all__ = [
    "Cell",
    "BPattern",
    "ResiduePair",
    "Congruence",
    "Realization",
    "RealizabilityReport",
    "CellVerdict",
    "VerificationReport",
    "BruteForceResult",
    "CorollaryReport",
    "PatternError",
    "HeaderError",
    "LineCountError",
    "LineLengthError",
    "IllegalCharacterError",
    "PatternBoxError",
    "CompleteRectangleError",
    "NotRealizableError",
    "parse_pattern",
    "crt",
    "contains_complete_rectangle",
    "find_missing_residue",
    "is_realizable",
    "realize",
    "verify_realization",
    "brute_force_realize",
    "translate_signatures",
    "square_pattern",
    "boundary_pattern",
    "ring_pattern",
    "square_corollary_check",
    "boundary_corollary_check",
]


class PatternError(ValueError):
    pass


class HeaderError(PatternError):
    pass


class LineCountError(PatternError):
    pass


class LineLengthError(PatternError):
    pass


class IllegalCharacterError(PatternError):
    pass


class PatternBoxError(PatternError):
    """Pattern height exceeds w**b."""


class CompleteRectangleError(ValueError):
    """Asked for a missing residue of a set that covers them all."""


class NotRealizableError(ValueError):
    def __init__(self, prime: int):
        super().__init__(f"circles contain a complete rectangle modulo ({prime}, {prime}^b)")
        self.prime = prime


class Cell(str, Enum):
    CIRCLE = "o"
    CROSS = "x"
    BLANK = "."


@dataclass(frozen=True)
class BPattern:
    b: int
    w: int
    h: int
    cells: Mapping[tuple[int, int], Cell] = field(default_factory=dict)

    def __post_init__(self):
        if self.b < 1 or self.w < 1 or self.h < 1:
            raise PatternError("b, w and h must be positive")
        if self.h > self.w**self.b:
            raise PatternBoxError(f"h={self.h} exceeds w^b={self.w**self.b}")
        marked = {}
        for (r, s), c in dict(self.cells).items():
            c = Cell(c)
            if not (1 <= r <= self.w and 1 <= s <= self.h):
                raise PatternError(f"cell {(r, s)} outside the {self.w}x{self.h} box")
            if c is not Cell.BLANK:
                marked[(r, s)] = c
        object.__setattr__(self, "cells", marked)

    @property
    def circles(self) -> list[tuple[int, int]]:
        return sorted((rs for rs, c in self.cells.items() if c is Cell.CIRCLE), key=_row_major)

    @property
    def crosses(self) -> list[tuple[int, int]]:
        """Crosses in row-major order: s ascending, then r ascending."""
        return sorted((rs for rs, c in self.cells.items() if c is Cell.CROSS), key=_row_major)

    def to_text(self) -> str:
        lines = [f"b={self.b} w={self.w} h={self.h}"]
        for s in range(self.h, 0, -1):
            lines.append("".join(self.cells.get((r, s), Cell.BLANK).value for r in range(1, self.w + 1)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_grid(cls, b: int, rows: list[str]) -> "BPattern":
        """Rows top (s = h) to bottom (s = 1), as in the text format."""
        return parse_pattern(f"b={b} w={len(rows[0]) if rows else 0} h={len(rows)}\n" + "\n".join(rows))


def _row_major(rs: tuple[int, int]) -> tuple[int, int]:
    return rs[1], rs[0]


_HEADER = re.compile(r"b=(\d+) w=(\d+) h=(\d+)")


def parse_pattern(text: str) -> BPattern:
    lines = text.splitlines()
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise HeaderError("empty pattern text")
    m = _HEADER.fullmatch(lines[0])
    if not m:
        raise HeaderError(f"header must read 'b=<int> w=<int> h=<int>', got {lines[0]!r}")
    b, w, h = (int(g) for g in m.groups())
    if b < 1 or w < 1 or h < 1:
        raise HeaderError("b, w and h must be positive")
    if h > w**b:
        raise PatternBoxError(f"h={h} exceeds w^b={w**b}")
    body = lines[1:]
    if len(body) != h:
        raise LineCountError(f"expected {h} grid lines, found {len(body)}")
    cells = {}
    for i, line in enumerate(body):
        if len(line) != w:
            raise LineLengthError(f"grid line {i + 1} has {len(line)} characters, expected {w}")
        bad = set(line) - {"o", "x", "."}
        if bad:
            raise IllegalCharacterError(f"grid line {i + 1} contains {sorted(bad)}; allowed: o x .")
        s = h - i
        for j, ch in enumerate(line):
            if ch != ".":
                cells[(j + 1, s)] = Cell(ch)
    return BPattern(b, w, h, cells)


# -- residues and CRT ----------------------------------------------------------------


@dataclass(frozen=True)
class ResiduePair:
    """(a mod m, c mod m**b)."""

    m: int
    b: int
    a: int
    c: int

    def __post_init__(self):
        if not (0 <= self.a < self.m and 0 <= self.c < self.m**self.b):
            raise ValueError(f"residues {(self.a, self.c)} out of range for modulus ({self.m}, {self.m}^{self.b})")


@dataclass(frozen=True)
class Congruence:
    """x = residue (mod modulus); ``source`` tags the construction stage."""

    modulus: int
    residue: int
    source: str

    def to_record(self) -> dict:
        return {"modulus": str(self.modulus), "residue": str(self.residue), "source": self.source}


def crt(congruences: Iterable[Congruence]) -> tuple[int, int]:
    """Solve pairwise-coprime congruences; returns (x, M) with 0 <= x < M."""
    x, M = 0, 1
    for c in congruences:
        m = c.modulus
        if math.gcd(M, m) != 1:
            raise ValueError(f"modulus {m} is not coprime to the moduli already present")
        # x + M*t = residue (mod m)
        t = ((c.residue - x) * pow(M, -1, m)) % m
        x += M * t
        M *= m
    return x % M, M


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def _residue_set(points: Iterable[tuple[int, int]], p: int, b: int) -> dict[tuple[int, int], tuple[int, int]]:
    pb = p**b
    seen: dict[tuple[int, int], tuple[int, int]] = {}
    for r, s in points:
        seen.setdefault((r % p, s % pb), (r, s))
    return seen


def contains_complete_rectangle(points: Iterable[tuple[int, int]], p: int, b: int) -> bool:
    """Whether the points cover all p**(b+1) pairs of Z/p x Z/p**b."""
    _check_prime(p)
    return len(_residue_set(points, p, b)) == p ** (b + 1)


def find_missing_residue(circles: Iterable[tuple[int, int]], p: int, b: int) -> ResiduePair:
    """Smallest (s_p, r_p), lexicographically, that no circle is congruent to."""
    _check_prime(p)
    seen = _residue_set(circles, p, b)
    if len(seen) == p ** (b + 1):
        raise CompleteRectangleError(f"circles cover every residue pair modulo ({p}, {p}^{b})")
    for c in range(p**b):
        for a in range(p):
            if (a, c) not in seen:
                return ResiduePair(p, b, a, c)
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class RealizabilityReport:
    realizable: bool
    witness_prime: int | None = None
    # residue pair -> one circle occupying it, when a complete rectangle exists
    rectangle: Mapping[tuple[int, int], tuple[int, int]] | None = None
    missing: Mapping[int, ResiduePair] = field(default_factory=dict)

    def to_record(self) -> dict:
        rec: dict = {"realizable": self.realizable}
        if self.realizable:
            rec["missing_residues"] = {str(p): [rp.a, rp.c] for p, rp in self.missing.items()}
        else:
            rec["witness_prime"] = self.witness_prime
            rec["complete_rectangle"] = [[list(k), list(v)] for k, v in sorted(self.rectangle.items())]
        return rec


def is_realizable(P: BPattern) -> RealizabilityReport:
    circles = P.circles
    missing = {}
    for p in primes_up_to(P.w).tolist():
        seen = _residue_set(circles, p, P.b)
        if len(seen) == p ** (P.b + 1):
            return RealizabilityReport(False, p, rectangle=dict(sorted(seen.items())))
        missing[p] = find_missing_residue(circles, p, P.b)
    return RealizabilityReport(True, missing=missing)


# -- verification ----------------------------------------------------------------------


@dataclass(frozen=True)
class CellVerdict:
    cell: tuple[int, int]
    kind: Cell
    status: str  # "ok", "fail" or "unverified"
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass(frozen=True)
class VerificationReport:
    u: int
    v: int
    verdicts: tuple[CellVerdict, ...]

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)

    @property
    def failures(self) -> list[CellVerdict]:
        return [v for v in self.verdicts if v.status == "fail"]

    @property
    def unverified(self) -> list[CellVerdict]:
        return [v for v in self.verdicts if v.status == "unverified"]

    def to_record(self) -> dict:
        return {
            "u": str(self.u),
            "v": str(self.v),
            "ok": self.ok,
            "cells": [{"r": c.cell[0], "s": c.cell[1], "kind": c.kind.value, "status": c.status, "detail": c.detail} for c in self.verdicts],
        }


def _b_power_primes(G: int, y: int, b: int, bound: int) -> tuple[list[int], int]:
    """Primes q | G with q**b | y, and the unfactored cofactor of G (1 if none)."""
    factors, rest, complete = trial_divide(G, bound)
    hits = [q for q in factors if y % q**b == 0]
    return hits, (1 if complete else rest)


def verify_realization(
    P: BPattern,
    u: int,
    v: int,
    cross_primes: Mapping[tuple[int, int], int] | None = None,
    trial_bound: int = 10**7,
) -> VerificationReport:
    """Per-cell check of the translate (u, v) + P.

    Only G = gcd(u+r, v+s) is factored, since any prime in gcd_b(u+r, v+s)
    divides it. A cell whose G keeps a cofactor after trial division to
    ``trial_bound`` is reported ``unverified`` unless a hit was already
    found.
    """
    if u < 0 or v < 0:
        raise ValueError("translate coordinates must be nonnegative")
    b = P.b
    out = []
    for (r, s), kind in sorted(P.cells.items(), key=lambda kv: _row_major(kv[0])):
        x, y = u + r, v + s
        if kind is Cell.CROSS and cross_primes and (r, s) in cross_primes:
            Q = cross_primes[(r, s)]
            if x % Q == 0 and y % Q**b == 0:
                out.append(CellVerdict((r, s), kind, "ok", f"planted prime {Q}"))
                continue
        G = math.gcd(x, y)
        hits, rest = _b_power_primes(G, y, b, trial_bound) if G > 1 else ([], 1)
        if kind is Cell.CROSS:
            if hits:
                out.append(CellVerdict((r, s), kind, "ok", f"{hits[0]}^{b} divides"))
            elif rest > 1:
                out.append(CellVerdict((r, s), kind, "unverified", f"G-cofactor {rest}"))
            else:
                out.append(CellVerdict((r, s), kind, "fail", "point is b-visible"))
        else:
            if hits:
                out.append(CellVerdict((r, s), kind, "fail", f"{hits[0]}^{b} divides"))
            elif rest > 1:
                out.append(CellVerdict((r, s), kind, "unverified", f"G-cofactor {rest}"))
            else:
                out.append(CellVerdict((r, s), kind, "ok", f"gcd = {G}"))
    return VerificationReport(u, v, tuple(out))


# -- construction ------------------------------------------------------------------------


@dataclass(frozen=True)
class Realization:
    """A translate (u, v) with the congruences that produced it."""

    pattern: BPattern
    u: int
    v: int
    u_congruences: tuple[Congruence, ...]
    v_congruences: tuple[Congruence, ...]
    u_modulus: int
    v_modulus: int
    cross_primes: Mapping[tuple[int, int], int]
    u_index: int = 0

    def verify(self, trial_bound: int = 10**7) -> VerificationReport:
        return verify_realization(self.pattern, self.u, self.v, self.cross_primes, trial_bound)

    def shifted(self, t: int) -> tuple[int, int]:
        """(u, v + t * v_modulus): keeps every congruence, so it stays a realization."""
        return self.u, self.v + t * self.v_modulus

    def to_record(self) -> dict:
        return {
            "u": str(self.u),
            "v": str(self.v),
            "b": self.pattern.b,
            "w": self.pattern.w,
            "h": self.pattern.h,
            "u_index": self.u_index,
            "u_modulus": str(self.u_modulus),
            "v_modulus": str(self.v_modulus),
            "u_congruences": [c.to_record() for c in self.u_congruences],
            "v_congruences": [c.to_record() for c in self.v_congruences],
            "cross_primes": [{"r": r, "s": s, "Q": Q} for (r, s), Q in sorted(self.cross_primes.items(), key=lambda kv: _row_major(kv[0]))],
        }


def realize(
    P: BPattern,
    u_index: int = 0,
    trial_bound: int = 10**5,
    factor_budget_s: float = 10.0,
    max_retries: int = 5,
    verify: bool = True,
) -> Realization:
    """Build (u, v) with (u, v) + P realizing P.

    Stage 1 plants (u, v) = (-r_p, -s_p) mod (p, p**b) for every prime
    p <= w, using the missing residue of the circles. Stage 2 gives each
    cross (i, j) its own prime Q > w and plants (u, v) = (-i, -j) mod
    (Q, Q**b). u is the smallest positive solution (plus ``u_index`` full
    periods). Stage 3 factors u + r for each column r holding a circle and
    forces v = 0 mod q**b for every new prime q found there, so no circle
    picks up a q**b.

    If factoring u + r overruns ``factor_budget_s`` the next u in the
    residue class is tried, up to ``max_retries`` times; after that the
    :class:`FactorizationTimeout` propagates.
    """
    report = is_realizable(P)
    if not report.realizable:
        raise NotRealizableError(report.witness_prime)
    b, w = P.b, P.w
    u_cong: list[Congruence] = []
    v_cong: list[Congruence] = []
    small = primes_up_to(w).tolist()
    for p in small:
        rp = report.missing[p]
        u_cong.append(Congruence(p, (-rp.a) % p, f"stage1 p={p}"))
        v_cong.append(Congruence(p**b, (-rp.c) % p**b, f"stage1 p={p}"))
    cross_primes: dict[tuple[int, int], int] = {}
    Q = w
    for i, j in P.crosses:
        Q = next_prime(Q)
        cross_primes[(i, j)] = Q
        u_cong.append(Congruence(Q, (-i) % Q, f"stage2 cross=({i},{j})"))
        v_cong.append(Congruence(Q**b, (-j) % Q**b, f"stage2 cross=({i},{j})"))
    u0, Mu = crt(u_cong)
    if u0 == 0:
        u0 = Mu
    planted = set(small) | set(cross_primes.values())
    circle_cols = sorted({r for r, _ in P.circles})

    last_err: FactorizationTimeout | None = None
    for attempt in range(max_retries + 1):
        idx = u_index + attempt
        u = u0 + idx * Mu
        try:
            extra: dict[int, str] = {}
            for r in circle_cols:
                for q in factorize(u + r, trial_bound, factor_budget_s):
                    if q not in planted and q not in extra:
                        extra[q] = f"stage3 q | u+{r}"
        except FactorizationTimeout as err:
            last_err = err
            continue
        v3 = [Congruence(q**b, 0, src) for q, src in sorted(extra.items())]
        v0, Mv = crt(v_cong + v3)
        if v0 == 0:
            v0 = Mv
        real = Realization(P, u, v0, tuple(u_cong), tuple(v_cong + v3), Mu, Mv, cross_primes, idx)
        if verify:
            rep = real.verify()
            if not rep.ok:
                bad = rep.failures + rep.unverified
                raise AssertionError(f"construction failed verification at {[c.cell for c in bad]}")
        return real
    assert last_err is not None
    raise last_err


# -- brute force ---------------------------------------------------------------------


@dataclass(frozen=True)
class BruteForceResult:
    found: tuple[int, int] | None
    bound: int

    @property
    def conclusive(self) -> bool:
        return self.found is not None

    def to_record(self) -> dict:
        return {"found": None if self.found is None else list(self.found), "bound": self.bound}


_CHUNK_CELLS = 1 << 22


def _scan_square(P: BPattern, S: int) -> tuple[int, int] | None:
    """Lexicographically smallest (u, v) in [0, S]^2 realizing P, by direct visibility."""
    marked = sorted(P.cells.items())
    n = S + 1
    rows_per_chunk = max(1, _CHUNK_CELLS // (n + P.h))
    for ua in range(0, n, rows_per_chunk):
        ub = min(n, ua + rows_per_chunk)
        vis = visibility_bitmap(ub - ua + P.w, n + P.h, P.b, r0=ua + 1, s0=1)
        ok = np.ones((ub - ua, n), dtype=bool)
        for (r, s), kind in marked:
            sub = vis[r - 1 : r - 1 + ub - ua, s - 1 : s - 1 + n]
            if kind is Cell.CIRCLE:
                ok &= sub
            else:
                ok &= ~sub
        hit = np.flatnonzero(ok.ravel())
        if hit.size:
            i, j = divmod(int(hit[0]), n)
            return ua + i, j
    return None


def brute_force_realize(P: BPattern, search_bound: int, start: int = 64) -> BruteForceResult:
    """Scan translates 0 <= u, v <= search_bound with direct visibility checks.

    Squares [0, S]^2 grow by doubling from ``start``; the answer is the
    lexicographically smallest hit in the first square that has one.
    ``found=None`` means nothing under the bound, which is not a proof of
    non-realizability.
    """
    if search_bound < 0:
        raise ValueError("search bound must be nonnegative")
    S = min(start, search_bound)
    while True:
        hit = _scan_square(P, S)
        if hit is not None:
            return BruteForceResult(hit, search_bound)
        if S >= search_bound:
            return BruteForceResult(None, search_bound)
        S = min(2 * S + 1, search_bound)


def _signature_codes(b: int, w: int, h: int, n: int, ua: int, ub: int) -> np.ndarray:
    """Column-major codes of translates ua <= u < ub, 0 <= v < n, flattened row-major in u.

    Bit (r-1)*h + (s-1) is set when (u+r, v+s) is visible; callers remap
    the few distinct codes to the public row-major layout.
    """
    vis = visibility_bitmap(ub - ua + w, n + h, b, r0=ua + 1, s0=1)
    dt = np.uint16 if w * h <= 16 else np.uint64
    rows = ub - ua
    # column code of each x: bit s-1 set when (x, v+s) is visible
    col = np.zeros((vis.shape[0], n), dtype=dt)
    for s in range(h):
        col |= vis[:, s : s + n].astype(dt) << dt(s)
    code = col[:rows].copy()
    for r in range(1, w):
        code |= col[r : r + rows] << dt(r * h)
    return code.ravel()


def _to_row_major(code: int, w: int, h: int) -> int:
    out = 0
    for r in range(w):
        for s in range(h):
            if code >> (r * h + s) & 1:
                out |= 1 << (s * w + r)
    return out


def _present(codes: np.ndarray, nbits: int) -> np.ndarray:
    if nbits <= 16:
        return np.flatnonzero(np.bincount(codes, minlength=1 << nbits))
    return np.unique(codes)


def translate_signatures(b: int, w: int, h: int, bound: int, workers: int = 1) -> dict[int, tuple[int, int]]:
    """Visibility signature of every translate of the w x h box, 0 <= u, v <= bound.

    Bit ``(s-1)*w + (r-1)`` of a signature is set when (u+r, v+s) is
    b-visible. Maps each signature seen to its lexicographically smallest
    (u, v); a fully specified circle/cross pattern is realized under the
    bound iff its circle mask is a key. Batches of ``workers`` u-chunks run
    on threads and are merged in u order.
    """
    if w * h > 62:
        raise ValueError("box too large for 64-bit signatures")
    n = bound + 1
    rows_per_chunk = max(1, _CHUNK_CELLS // (n + h))
    starts = list(range(0, n, rows_per_chunk))
    job = lambda ua: _signature_codes(b, w, h, n, ua, min(n, ua + rows_per_chunk))
    first: dict[int, tuple[int, int]] = {}
    workers = max(1, workers)
    ex = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        for i in range(0, len(starts), workers):
            batch = starts[i : i + workers]
            chunks = list(ex.map(job, batch)) if ex else [job(batch[0])]
            for ua, codes in zip(batch, chunks):
                for key in _present(codes, w * h).tolist():
                    if key not in first:
                        du, dv = divmod(int(np.argmax(codes == key)), n)
                        first[key] = (ua + du, dv)
    finally:
        if ex:
            ex.shutdown()
    return {_to_row_major(k, w, h): uv for k, uv in first.items()}


# -- corollaries ---------------------------------------------------------------------------


def _box_width(width: int, height: int, b: int) -> int:
    w = width
    while w**b < height:
        w += 1
    return w


def square_pattern(N: int, b: int) -> BPattern:
    """N x N square of circles."""
    if N < 1:
        raise ValueError("N must be positive")
    return BPattern(b, N, N, {(r, s): Cell.CIRCLE for r in range(1, N + 1) for s in range(1, N + 1)})


def boundary_pattern(M: int, N: int, b: int) -> BPattern:
    """M wide, N high rectangle: circles on the boundary, crosses inside.

    The box widens with blank columns when N > M**b.
    """
    if M < 2 or N < 2:
        raise ValueError("boundary pattern needs M, N >= 2")
    cells = {}
    for r in range(1, M + 1):
        for s in range(1, N + 1):
            edge = r in (1, M) or s in (1, N)
            cells[(r, s)] = Cell.CIRCLE if edge else Cell.CROSS
    return BPattern(b, _box_width(M, N, b), N, cells)


def ring_pattern(b: int) -> BPattern:
    """Circle at (2, 2) with its eight neighbours crossed; height 9 for b >= 2, 3 for b = 1."""
    h = 3 if b == 1 else 9
    cells = {(r, s): Cell.CROSS for r in (1, 2, 3) for s in (1, 2, 3)}
    cells[(2, 2)] = Cell.CIRCLE
    return BPattern(b, 3, h, cells)


@dataclass(frozen=True)
class CorollaryReport:
    name: str
    params: dict
    theorem_verdict: bool
    stated_condition: bool
    derived_condition: bool
    realizability: RealizabilityReport
    brute_force: BruteForceResult | None = None

    @property
    def stated_agrees(self) -> bool:
        return self.stated_condition == self.theorem_verdict

    @property
    def derived_agrees(self) -> bool:
        return self.derived_condition == self.theorem_verdict

    @property
    def discrepancy(self) -> bool:
        return not (self.stated_agrees and self.derived_agrees)

    def to_record(self) -> dict:
        rec = {
            "op": f"{self.name}_corollary",
            **self.params,
            "theorem_verdict": self.theorem_verdict,
            "stated_condition": self.stated_condition,
            "derived_condition": self.derived_condition,
            "stated_agrees": self.stated_agrees,
            "derived_agrees": self.derived_agrees,
            "discrepancy": self.discrepancy,
            "realizability": self.realizability.to_record(),
        }
        if self.brute_force is not None:
            rec["brute_force"] = self.brute_force.to_record()
        return rec


def square_corollary_check(N: int, b: int, brute_bound: int = 0) -> CorollaryReport:
    """All-circle N x N square.

    Stated condition: N**2 < 2**b. Condition read off the residue
    criterion: N < 2**b (p = 2 needs both parities of r and every residue
    of s mod 2**b, and larger primes need even more room).
    """
    P = square_pattern(N, b)
    rep = is_realizable(P)
    brute = brute_force_realize(P, brute_bound) if brute_bound > 0 else None
    return CorollaryReport("square", {"N": N, "b": b}, rep.realizable, N * N < 2**b, N < 2**b, rep, brute)


def boundary_corollary_check(M: int, N: int, b: int) -> CorollaryReport:
    """Circle-fenced rectangle of crosses.

    b = 1: realizable iff M and N are both odd (stated and derived agree).
    b >= 2: the statement says "M odd or N >= 2**b"; its proof establishes
    "M odd or N < 2**b". Both are reported against the residue criterion.
    """
    P = boundary_pattern(M, N, b)
    rep = is_realizable(P)
    if b == 1:
        stated = derived = (M % 2 == 1 and N % 2 == 1)
    else:
        stated = M % 2 == 1 or N >= 2**b
        derived = M % 2 == 1 or N < 2**b
    return CorollaryReport("boundary", {"M": M, "N": N, "b": b}, rep.realizable, stated, derived, rep)
