"""Recurrences for the full sum, obtained by summing k-free recurrences over the summation variables."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Sequence, Tuple

from .algebra import MultiPoly, PolyRing, RatFunc
from .celine import (KFreeRecurrence, SCHEMA_VERSION, coefficient_terms_vanish, normalize_coeffs,
                     poly_from_json, poly_to_json)
from .qterm import Summand, gen_name
from .render import laurent_from_poly, relation_text

Shift = Tuple[int, ...]


class SumRecurrenceError(ArithmeticError):
    pass


class CollapseError(SumRecurrenceError):
    def __init__(self):
        super().__init__("recurrence collapsed to 0")


@dataclass
class SumRecurrence:
    """``sum_i coeffs[i] * SUM(n - i) = 0``."""

    rec_vars: Tuple[str, ...]
    ring: PolyRing
    coeffs: Dict[Shift, MultiPoly]

    def __post_init__(self):
        self.coeffs = {tuple(s): c for s, c in self.coeffs.items() if c}
        if not self.coeffs:
            raise CollapseError()

    @property
    def shifts(self) -> Tuple[Shift, ...]:
        return tuple(sorted(self.coeffs))

    def coefficient(self, s: Sequence[int]) -> MultiPoly:
        return self.coeffs.get(tuple(s), self.ring.zero())

    def normalized(self) -> "SumRecurrence":
        return SumRecurrence(self.rec_vars, self.ring, normalize_coeffs(self.coeffs))

    def _reindex(self, u: Sequence[int]) -> "SumRecurrence":
        """Substitute ``n -> n + u``: shifts become ``i - u`` and ``q^(n_l) -> q^(u_l) q^(n_l)``."""
        ring = self.ring
        idx = {ring.index(gen_name(v)): ul for v, ul in zip(self.rec_vars, u) if gen_name(v) in ring.gens}
        moved = {}
        for s, c in self.coeffs.items():
            terms = []
            for exps, a in c.sorted_terms():
                exps = list(exps)
                exps[0] += sum(exps[i] * ul for i, ul in idx.items())
                terms.append((exps, a))
            moved[tuple(a - b for a, b in zip(s, u))] = terms
        low = min(e[0] for terms in moved.values() for e, _ in terms)
        coeffs = {s: ring.from_terms([([e[0] - low] + e[1:], a) for e, a in terms]) for s, terms in moved.items()}
        return SumRecurrence(self.rec_vars, ring, coeffs)

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "sum_recurrence",
            "rec_vars": list(self.rec_vars),
            "generators": list(self.ring.gens),
            "terms": [{"shift": list(s), "coeff": poly_to_json(self.coeffs[s])} for s in self.shifts],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "SumRecurrence":
        if doc.get("kind") != "sum_recurrence":
            raise ValueError("not a sum recurrence document")
        ring = PolyRing(doc["generators"])
        return cls(tuple(doc["rec_vars"]), ring,
                   {tuple(t["shift"]): poly_from_json(ring, t["coeff"]) for t in doc["terms"]})

    def render(self, forward: bool = False) -> str:
        """``SUM(...)`` notation; ``forward`` writes arguments as ``n + j`` with ``j >= 0``."""
        if forward:
            terms = {j: laurent_from_poly(c) for j, c in forward_shifts(self).items()}
        else:
            terms = {s: laurent_from_poly(c) for s, c in self.coeffs.items()}
        return relation_text("SUM", self.rec_vars, self.ring.gens, terms, forward=forward, pivot=not forward)


def sumOver(rec: KFreeRecurrence) -> SumRecurrence:
    """``c_i = sum_j sigma_(i, j)``; summing over all summation variables removes ``j``."""
    n = len(rec.rec_vars)
    acc: Dict[Shift, MultiPoly] = {}
    for s, c in rec.coeffs.items():
        key = s[:n]
        acc[key] = acc.get(key, rec.ring.zero()) + c
    acc = {s: c for s, c in acc.items() if c}
    if not acc:
        raise CollapseError()
    return SumRecurrence(rec.rec_vars, rec.ring, normalize_coeffs(acc))


def backwardShifts(rec: SumRecurrence) -> SumRecurrence:
    """Re-index so that every variable's smallest shift is 0, i.e. all arguments are ``n_l - i_l`` with ``i_l >= 0``."""
    u = [min(s[i] for s in rec.coeffs) for i in range(len(rec.rec_vars))]
    if not any(u):
        return rec.normalized()
    return rec._reindex(u).normalized()


def forward_shifts(rec: SumRecurrence) -> Dict[Shift, MultiPoly]:
    """The same recurrence written with forward offsets ``n + j``, ``j >= 0``, as ``{j: coefficient}``."""
    top = [max(s[i] for s in rec.coeffs) for i in range(len(rec.rec_vars))]
    moved = rec._reindex(top)
    return {tuple(-x for x in s): c for s, c in moved.coeffs.items()}


def from_forward(rec_vars: Sequence[str], ring: PolyRing, terms: Mapping[Shift, MultiPoly]) -> SumRecurrence:
    """Inverse of :func:`forward_shifts`: offsets ``j`` become shifts ``-j``, then backward."""
    return backwardShifts(SumRecurrence(tuple(rec_vars), ring, {tuple(-x for x in j): c for j, c in terms.items()}))


# termwise verification


@dataclass
class TermwiseCertificate:
    holds: bool
    summand: str
    rec_vars: Tuple[str, ...]
    sum_vars: Tuple[str, ...]
    window: int
    candidates_tried: int
    shifts: Dict[Shift, Shift] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "termwise_certificate",
            "holds": self.holds,
            "summand": self.summand,
            "rec_vars": list(self.rec_vars),
            "sum_vars": list(self.sum_vars),
            "window": self.window,
            "candidates_tried": self.candidates_tried,
            "sShifts": [{"term": list(i), "sum_shift": list(j)} for i, j in sorted(self.shifts.items())],
        }


def _assignments(n_terms: int, width: int, window: int) -> Iterator[Tuple[Shift, ...]]:
    """Per-term shift vectors in ``[-window, window]^width``, all-zero first, then by total |shift|."""
    vectors = sorted(itertools.product(range(-window, window + 1), repeat=width),
                     key=lambda v: (sum(map(abs, v)), [abs(x) for x in v], [-x for x in v]))
    by_cost: Dict[int, List[Shift]] = {}
    for v in vectors:
        by_cost.setdefault(sum(map(abs, v)), []).append(v)
    top = max(by_cost)
    for total in range(0, n_terms * top + 1):
        yield from _split_cost(n_terms, total, by_cost)


def _split_cost(n_terms: int, total: int, by_cost: Dict[int, List[Shift]]):
    if n_terms == 0:
        if total == 0:
            yield ()
        return
    for c in sorted(by_cost):
        if c > total:
            break
        for v in by_cost[c]:
            for rest in _split_cost(n_terms - 1, total - c, by_cost):
                yield (v,) + rest


def checkTermwise(f: Summand, rec: SumRecurrence, window: int = 0,
                  max_candidates: int = 100_000) -> TermwiseCertificate:
    """Look for summation shifts ``j_i`` with ``sum_i c_i F(n - i, k - j_i) = 0`` identically.

    Such a witness proves the sum satisfies ``rec``, since each
    ``sum_k F(n - i, k - j_i)`` equals ``SUM(n - i)``.  Failure within the
    window is inconclusive.
    """
    table = f.table
    if tuple(table.rec) != tuple(rec.rec_vars):
        raise SumRecurrenceError(f"summand recurrence variables {table.rec} differ from {rec.rec_vars}")
    if window < 0:
        raise ValueError("window must be non-negative")
    ring = table.generator_ring
    shifts = rec.shifts
    coeffs = [rec.coeffs[s].change_ring(ring) for s in shifts]
    width = len(table.sums)
    tried = 0
    for assignment in _assignments(len(shifts), width, window):
        tried += 1
        terms = [(tuple(s) + j, c) for s, j, c in zip(shifts, assignment, coeffs)]
        if coefficient_terms_vanish(f, terms):
            return TermwiseCertificate(True, f.name, table.rec, table.sums, window, tried,
                                       dict(zip(shifts, assignment)))
        if tried >= max_candidates:
            break
    return TermwiseCertificate(False, f.name, table.rec, table.sums, window, tried)


def recheck_certificate(f: Summand, rec: SumRecurrence, cert: TermwiseCertificate) -> bool:
    """Re-verify a witness from scratch with plain rational-function arithmetic."""
    if not cert.holds:
        return False
    ring = f.table.generator_ring
    total = RatFunc.from_poly(ring.zero())
    for s, c in rec.coeffs.items():
        j = cert.shifts[s]
        total = total + f.shift_ratfunc(tuple(s) + tuple(j)) * RatFunc.from_poly(c.change_ring(ring))
    return total.is_zero()

