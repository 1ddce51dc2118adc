"""Independent brute-force evaluation of the bounded sums and identities."""

from .grid import IDENTITIES, check_recurrence, eval_coefficient, grid_points, parse_grid, verifyGrid
from .identities import (
    T,
    delta_solution,
    l1_boundary_rhs,
    eulerSides,
    gPoly,
    jacobiSides,
    pPoly,
    qBin,
    qMultinomial,
    rhsDouble,
    rhsSingle,
    stabilizationCheck,
)
from .qpoly import BiLaurent, QPoly

__all__ = [
    "BiLaurent",
    "IDENTITIES",
    "QPoly",
    "T",
    "check_recurrence",
    "delta_solution",
    "l1_boundary_rhs",
    "eulerSides",
    "eval_coefficient",
    "gPoly",
    "grid_points",
    "jacobiSides",
    "pPoly",
    "parse_grid",
    "qBin",
    "qMultinomial",
    "rhsDouble",
    "rhsSingle",
    "stabilizationCheck",
    "verifyGrid",
]
