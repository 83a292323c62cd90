"""The generalized gcd_b(r, s) = max{k : k | r, k**b | s} and its lattice statistics."""

from .arith import ArithTable, InvalidPoint, gcd_b, is_b_visible, zeta
from .factor import FactorizationTimeout, factorize
from .patterns import BPattern, Cell, is_realizable, parse_pattern, realize, verify_realization

__version__ = "0.1.0"

__all__ = [
    "ArithTable",
    "BPattern",
    "Cell",
    "FactorizationTimeout",
    "InvalidPoint",
    "factorize",
    "gcd_b",
    "is_b_visible",
    "is_realizable",
    "parse_pattern",
    "realize",
    "verify_realization",
    "zeta",
]
