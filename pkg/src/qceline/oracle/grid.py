"""Grid verification of identities and recurrences with exact arithmetic."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from . import identities as ids
from .qpoly import BiLaurent, QPoly

Range = Tuple[int, int]

_SMALL = (0, 3)
_WIDE = (-2, 7)


@dataclass(frozen=True)
class Identity:
    params: Tuple[str, ...]
    defaults: Tuple[Range, ...]
    lhs: Callable
    rhs: Callable


def _l1_recursion_rhs(i, j, k, L1, L2, M):
    return ids.gPoly(i, j, k, L1 - 1, L2, M) + ids.gPoly(i - 1, j, k, L1 - 1, L2 - 1, M - 1).shift(L1)


IDENTITIES: Dict[str, Identity] = {
    "g_eq_p": Identity(("i", "j", "k", "L1", "L2", "M"), (_SMALL,) * 3 + (_WIDE,) * 3,
                       ids.gPoly, ids.pPoly),
    "p_double": Identity(("i", "j", "k", "L", "M"), (_SMALL,) * 3 + (_WIDE,) * 2,
                       lambda i, j, k, L, M: ids.pPoly(i, j, k, L, L, M), ids.rhsDouble),
    "double_single": Identity(("i", "j", "k", "L"), (_SMALL,) * 3 + (_WIDE,),
                       lambda i, j, k, L: ids.rhsDouble(i, j, k, L, L), ids.rhsSingle),
    "g_single": Identity(("i", "j", "k", "L"), (_SMALL,) * 3 + (_WIDE,),
                         lambda i, j, k, L: ids.gPoly(i, j, k, L, L, L), ids.rhsSingle),
    "g_eq_p_boundary": Identity(("i", "j", "k", "L1", "M"), (_SMALL,) * 3 + (_WIDE,) * 2,
                                   lambda i, j, k, L1, M: ids.gPoly(i, j, k, L1, i + j - 1, M),
                                   lambda i, j, k, L1, M: ids.pPoly(i, j, k, L1, i + j - 1, M)),
    "g_delta_boundary": Identity(("i", "j", "k", "M"), (_SMALL,) * 3 + (_WIDE,),
                                lambda i, j, k, M: ids.gPoly(i, j, k, i + j - 1, i + j - 1, M),
                                lambda i, j, k, M: ids.delta_solution(i, j, k, M - i - j)),
    "g_delta_zero": Identity(("i", "j", "k"), (_SMALL,) * 3,
                            lambda i, j, k: ids.gPoly(i, j, k, i + j - 1, i + j - 1, i + j),
                            lambda i, j, k: ids.delta_solution(i, j, k, 0)),
    "g_l1_recursion": Identity(("i", "j", "k", "L1", "L2", "M"), (_SMALL,) * 3 + (_WIDE,) * 3,
                      ids.gPoly, _l1_recursion_rhs),
    "g_l1_boundary": Identity(("i", "j", "k", "L2", "M"), (_SMALL,) * 3 + (_WIDE,) * 2,
                      lambda i, j, k, L2, M: ids.gPoly(i, j, k, i - 1, L2, M), ids.l1_boundary_rhs),
    "jacobi": Identity(("L",), ((0, 8),),
                          ids.jacobi_left, lambda L: ids.jacobiSides(L)[1]),
    "euler": Identity(("L",), ((0, 8),),
                            ids.euler_left, lambda L: ids.eulerSides(L)[1]),
}


def parse_grid(spec: Optional[str]) -> Dict[str, Range]:
    """``"i=0..3,L1=-2..7"`` -> ``{"i": (0, 3), "L1": (-2, 7)}``; a single value is a one-point range."""
    out: Dict[str, Range] = {}
    if not spec:
        return out
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)\s*=\s*(-?\d+)(?:\s*\.\.\s*(-?\d+))?", part)
        if not m:
            raise ValueError(f"bad grid component {part!r}")
        lo = int(m.group(2))
        hi = int(m.group(3)) if m.group(3) is not None else lo
        if hi < lo:
            raise ValueError(f"empty range in {part!r}")
        out[m.group(1)] = (lo, hi)
    return out


def verifyGrid(identity: str, ranges: Optional[Mapping[str, Range]] = None) -> dict:
    """Compare both sides at every grid point; stop at the first mismatch."""
    if identity not in IDENTITIES:
        raise KeyError(f"unknown identity {identity!r}; known: {sorted(IDENTITIES)}")
    ident = IDENTITIES[identity]
    ranges = dict(ranges or {})
    unknown = set(ranges) - set(ident.params)
    if unknown:
        raise KeyError(f"{identity} has no parameters {sorted(unknown)}")
    grid = [ranges.get(p, d) for p, d in zip(ident.params, ident.defaults)]
    report = {
        "identity": identity,
        "grid": {p: list(r) for p, r in zip(ident.params, grid)},
        "status": "pass",
        "points": 0,
    }
    for point in itertools.product(*(range(lo, hi + 1) for lo, hi in grid)):
        lhs, rhs = ident.lhs(*point), ident.rhs(*point)
        report["points"] += 1
        if lhs != rhs:
            report["status"] = "fail"
            report["counterexample"] = {
                "point": dict(zip(ident.params, point)),
                "lhs": str(lhs),
                "rhs": str(rhs),
            }
            break
    return report


# recurrences


Coefficient = Sequence[Tuple[Mapping[str, int], int]]


def eval_coefficient(coeff: Coefficient, point: Mapping[str, int], ground: Optional[str] = None):
    """Value of a polynomial in ``q``, ``q_v`` (standing for ``q^v``) and one ground symbol.

    ``coeff`` is plain data: a list of ``({generator: exponent}, coefficient)``.
    """
    out = BiLaurent() if ground else QPoly.zero()
    for mono, c in coeff:
        qe = 0
        ae = 0
        for gen, e in mono.items():
            if gen == "q":
                qe += e
            elif gen.startswith("q_"):
                qe += e * point[gen[2:]]
            elif gen == ground:
                ae += e
            else:
                raise KeyError(f"cannot evaluate generator {gen!r}")
        if ground:
            out = out + BiLaurent({(qe, ae): c})
        else:
            out = out + QPoly.monomial(qe, c)
    return out


def check_recurrence(terms: Sequence[Tuple[Sequence[int], Coefficient]], variables: Sequence[str],
                     sequence: Callable[..., object], points: Sequence[Mapping[str, int]],
                     ground: Optional[str] = None) -> dict:
    """Verify ``sum_i c_i(v) * S(v - i) = 0`` at each point, exactly."""
    checked = 0
    for point in points:
        total = BiLaurent() if ground else QPoly.zero()
        for shift, coeff in terms:
            args = {v: point[v] - s for v, s in zip(variables, shift)}
            value = sequence(**args)
            c = eval_coefficient(coeff, point, ground)
            if ground and isinstance(value, QPoly):
                value = BiLaurent.from_qpoly(value)
            total = total + c * value
        checked += 1
        if not total.is_zero():
            return {"status": "fail", "points": checked, "counterexample": {"point": dict(point), "residual": str(total)}}
    return {"status": "pass", "points": checked}


def grid_points(ranges: Mapping[str, Range]) -> List[Dict[str, int]]:
    names = list(ranges)
    return [dict(zip(names, p)) for p in itertools.product(*(range(lo, hi + 1) for lo, hi in ranges.values()))]
