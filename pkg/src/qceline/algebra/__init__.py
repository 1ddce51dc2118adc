"""Exact polynomial arithmetic, rational functions and fraction-free nullspaces."""

from .gcd import poly_gcd, poly_gcd_many, poly_lcm
from .linalg import PolyMatrix, normalize_vector, nullspace
from .polynomial import MultiPoly, PolyRing
from .ratfunc import RatFunc, rat_reduce

__all__ = [
    "MultiPoly",
    "PolyMatrix",
    "PolyRing",
    "RatFunc",
    "normalize_vector",
    "nullspace",
    "poly_gcd",
    "poly_gcd_many",
    "poly_lcm",
    "rat_reduce",
]
