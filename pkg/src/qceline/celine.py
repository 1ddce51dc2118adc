"""k-free recurrences by Celine's method.

For a structure set ``S`` the unknowns ``sigma_s`` must satisfy
``sum_s sigma_s(X) * F(v - s) / F(v) = 0``.  Each quotient is kept factored;
after multiplying by the least common multiple of the denominators that
involve summation generators, every term splits into a factor free of those
generators and a polynomial in them.  Comparing coefficients of summation
monomials gives a linear system over the coefficient ring.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra import MultiPoly, PolyMatrix, PolyRing, nullspace, poly_gcd_many
from .algebra.linalg import vector_content
from .qterm import QProduct, Summand
from .qterm.forms import linear_parts
from .qterm.product import coprime_base, lcm_of, rewrite_in_base
from .render import laurent_from_poly, relation_text
from .structset import StructureSet

SCHEMA_VERSION = 1
_PRIME = (1 << 61) - 1

Shift = Tuple[int, ...]


class CelineError(ArithmeticError):
    pass


@dataclass
class KFreeRecurrence:
    """``sum_s coeffs[s] * F(v - s) = 0`` with polynomial coefficients in ``q``, ``q_v`` and grounds."""

    rec_vars: Tuple[str, ...]
    sum_vars: Tuple[str, ...]
    ring: PolyRing
    structure: Tuple[Shift, ...]
    coeffs: Dict[Shift, MultiPoly]

    @property
    def support(self) -> Tuple[Shift, ...]:
        return tuple(s for s in self.structure if s in self.coeffs)

    def coefficient(self, s: Sequence[int]) -> MultiPoly:
        return self.coeffs.get(tuple(s), self.ring.zero())

    def total_degree(self) -> int:
        return sum(c.total_degree() for c in self.coeffs.values())

    def normalized(self) -> "KFreeRecurrence":
        return KFreeRecurrence(self.rec_vars, self.sum_vars, self.ring, self.structure,
                               normalize_coeffs(self.coeffs))

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "kfree_recurrence",
            "rec_vars": list(self.rec_vars),
            "sum_vars": list(self.sum_vars),
            "generators": list(self.ring.gens),
            "structure": [list(s) for s in self.structure],
            "terms": [{"shift": list(s), "coeff": poly_to_json(self.coeffs[s])} for s in self.support],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "KFreeRecurrence":
        if doc.get("kind") != "kfree_recurrence":
            raise ValueError("not a k-free recurrence document")
        ring = PolyRing(doc["generators"])
        coeffs = {tuple(t["shift"]): poly_from_json(ring, t["coeff"]) for t in doc["terms"]}
        structure = tuple(tuple(s) for s in doc.get("structure", sorted(coeffs)))
        return cls(tuple(doc["rec_vars"]), tuple(doc["sum_vars"]), ring, structure,
                   {s: c for s, c in coeffs.items() if c})

    def render(self) -> str:
        names = self.rec_vars + self.sum_vars
        return relation_text("F", names, self.ring.gens,
                             {s: laurent_from_poly(c) for s, c in self.coeffs.items()})


def poly_to_json(p: MultiPoly) -> list:
    """``[[{generator: exponent}, coefficient], ...]``; non-integer coefficients become strings."""
    out = []
    for exps, c in p.sorted_terms():
        mono = {g: e for g, e in zip(p.ring.gens, exps) if e}
        c = Fraction(c)
        out.append([mono, c.numerator if c.denominator == 1 else str(c)])
    return out


def poly_from_json(ring: PolyRing, data) -> MultiPoly:
    terms = []
    for mono, c in data:
        vec = [0] * ring.n
        for g, e in mono.items():
            vec[ring.index(g)] = int(e)
        terms.append((vec, Fraction(c)))
    return ring.from_terms(terms)


def normalize_coeffs(coeffs: Mapping[Shift, MultiPoly]) -> Dict[Shift, MultiPoly]:
    """Content-free (polynomial and rational) with the first nonzero coefficient, in
    lexicographic order of shifts, having a positive leading coefficient."""
    keys = sorted(s for s, c in coeffs.items() if c)
    if not keys:
        return {}
    vals = [coeffs[s] for s in keys]
    g = poly_gcd_many(vals)
    vals = [v.exquo(g) for v in vals]
    c = vector_content(vals)
    if c != 1:
        vals = [v * (1 / c) for v in vals]
    if vals[0].lc() < 0:
        vals = [-v for v in vals]
    return dict(zip(keys, vals))


class Ansatz:
    """The cleared, split shift quotients of a summand over a structure set."""

    def __init__(self, f: Summand, structure):
        self.f = f
        table = f.table
        self.ring = table.generator_ring
        self.ncoef = table.n_coefficient_gens
        self.coef_ring = PolyRing(self.ring.gens[:self.ncoef])
        self.elim_mask = sum(1 << i for i in range(self.ncoef, self.ring.n))
        self.structure = tuple(tuple(s) for s in structure)
        width = len(table.shiftable)
        for s in self.structure:
            if len(s) != width:
                raise CelineError(f"shift {s} has length {len(s)}, the summand has {width} shiftable variables")
        self.quotients = {s: f.shift_quotient(s) for s in self.structure}
        dens = [a for R in self.quotients.values() for a, m in R.atoms.items()
                if m < 0 and self._elim(a)]
        self.base = coprime_base(dens)
        self.rewritten = {s: self._rewrite(R) for s, R in self.quotients.items()}
        lcm = lcm_of([self._elim_part(R) for R in self.rewritten.values()], self.base)
        self.denominator = lcm
        self._columns: Dict[Shift, Dict[Tuple[int, ...], MultiPoly]] = {}

    def _elim(self, atom: MultiPoly) -> bool:
        return bool(atom.var_mask() & self.elim_mask)

    def _elim_part(self, p: QProduct) -> QProduct:
        mono = [0] * self.ncoef + list(p.mono[self.ncoef:])
        return QProduct(self.ring, 1, mono, {a: m for a, m in p.atoms.items() if self._elim(a)})

    def _rewrite(self, R: QProduct) -> QProduct:
        """Express the denominator atoms that involve summation generators in the base."""
        keep = {a: m for a, m in R.atoms.items() if m > 0 or not self._elim(a)}
        den = {a: m for a, m in R.atoms.items() if m < 0 and self._elim(a)}
        out = QProduct(self.ring, R.const, R.mono, keep)
        if den:
            out = out * rewrite_in_base(QProduct(self.ring, 1, None, den), self.base)
        return out

    def split(self, P: QProduct) -> Tuple[QProduct, QProduct]:
        """``P = C * E``: ``C`` free of summation generators, ``E`` a polynomial in them."""
        n = self.ncoef
        C = QProduct(self.ring, P.const, list(P.mono[:n]) + [0] * (self.ring.n - n),
                     {a: m for a, m in P.atoms.items() if not self._elim(a)})
        E = self._elim_part(P)
        return C, E

    def cleared(self, s: Shift) -> Tuple[QProduct, QProduct]:
        return self.split(self.rewritten[s] * self.denominator)

    def _group(self, E: QProduct) -> Dict[Tuple[int, ...], MultiPoly]:
        n = self.ncoef
        poly = E.expand()
        groups: Dict[Tuple[int, ...], list] = {}
        for exps, c in poly.sorted_terms():
            groups.setdefault(exps[n:], []).append((exps[:n], c))
        return {k: self.coef_ring.from_terms(v) for k, v in groups.items()}

    def column(self, s: Shift) -> Dict[Tuple[int, ...], MultiPoly]:
        hit = self._columns.get(s)
        if hit is None:
            hit = self._group(self.cleared(s)[1])
            self._columns[s] = hit
        return hit

    def elimination_support(self) -> set:
        out = set()
        for s in self.structure:
            out.update(self.column(s))
        return out

    def elimination_degrees(self) -> Tuple[int, ...]:
        """Largest exponent of each summation generator in the cleared polynomials."""
        support = self.elimination_support()
        return tuple(max(e[i] for e in support) for i in range(self.ring.n - self.ncoef))

    def fits(self, s: Sequence[int], degrees: Sequence[int]) -> bool:
        """Would ``s`` join the ansatz without a new denominator factor or a higher degree
        in any summation generator?"""
        try:
            R = self._rewrite(self.f.shift_quotient(tuple(s)))
        except ValueError:
            return False
        E = self._elim_part(R * self.denominator)
        if any(e < 0 for e in E.mono) or any(m < 0 for m in E.atoms.values()):
            return False
        return all(_degree_in(E, self.ncoef + i) <= d for i, d in enumerate(degrees))

    def factorial_ranges(self) -> List[Tuple[Tuple[int, ...], int, int]]:
        """For each factorial argument involving a summation variable: its shift
        coefficients and the range of its decrements over the structure set."""
        table = self.f.table
        names = table.shiftable
        sums = set(table.sums)
        out = []
        for form in self.f.factorial_forms():
            coeffs, _ = linear_parts(form)
            if not any(coeffs.get(v) for v in sums):
                continue
            vec = tuple(int(coeffs.get(v, 0)) for v in names)
            ds = [sum(a * b for a, b in zip(vec, t)) for t in self.structure]
            out.append((vec, min(ds), max(ds)))
        return out

    def within_ranges(self, s: Sequence[int], ranges) -> bool:
        """Does ``s`` keep every factorial argument inside its current range?"""
        for vec, lo, hi in ranges:
            d = sum(a * b for a, b in zip(vec, s))
            if not lo <= d <= hi:
                return False
        return True

    # the linear system

    def matrix(self) -> Tuple[List[Tuple[int, ...]], PolyMatrix]:
        cols = [self.column(s) for s in self.structure]
        rows = sorted(set().union(*cols))
        zero = self.coef_ring.zero()
        data = [[c.get(r, zero) for c in cols] for r in rows]
        return rows, PolyMatrix(self.coef_ring, data, len(self.structure))

    def solve(self, seed: int = 0) -> List[Dict[Shift, MultiPoly]]:
        """Normalized solution vectors ``sigma``, as maps from shifts to coefficients."""
        _, m = self.matrix()
        order = sorted(range(len(self.structure)), key=lambda j: (sum(self.structure[j]), self.structure[j]))
        taus = kernel_circuits(m, order, seed)
        scales = self._column_scales()
        out = []
        for tau in taus:
            sigma = {s: t * sc for s, t, sc in zip(self.structure, tau, scales) if t}
            out.append(normalize_coeffs(sigma))
        return out

    def _column_scales(self) -> List[MultiPoly]:
        """``L / C_s`` with ``L`` the lcm of the numerators of the ``C_s``."""
        invs = [self.cleared(s)[0].inverse() for s in self.structure]
        base = coprime_base(a for p in invs for a, m in p.atoms.items() if m < 0)
        invs = [_rewrite_all(p, base) for p in invs]
        L = lcm_of(invs, base)
        out = []
        for p in invs:
            scaled = (p * L).reduced()
            low = [min(0, e) for e in scaled.mono]
            if any(low) or any(m < 0 for m in scaled.atoms.values()):
                raise CelineError("column scale is not a polynomial")
            poly = scaled.expand()
            out.append(self.coef_ring.from_terms((e[:self.ncoef], c) for e, c in poly.sorted_terms()))
        return out


def _degree_in(E: QProduct, i: int) -> int:
    return E.mono[i] + sum(a.degree(i) * m for a, m in E.atoms.items())


def _rewrite_all(p: QProduct, base) -> QProduct:
    den = {a: m for a, m in p.atoms.items() if m < 0}
    out = QProduct(p.ring, p.const, p.mono, {a: m for a, m in p.atoms.items() if m > 0})
    if den:
        out = out * rewrite_in_base(QProduct(p.ring, 1, None, den), base)
    return out


# nullspace with a modular pre-pass


def _eval_mod(p: MultiPoly, point: Sequence[int], cache: dict) -> int:
    acc = 0
    for exps, c in p.sorted_terms():
        c = Fraction(c)
        v = c.numerator % _PRIME * pow(c.denominator, -1, _PRIME) % _PRIME
        for i, e in enumerate(exps):
            if e:
                key = (i, e)
                x = cache.get(key)
                if x is None:
                    x = pow(point[i], e, _PRIME)
                    cache[key] = x
                v = v * x % _PRIME
        acc += v
    return acc % _PRIME


def _modular_image(m: PolyMatrix, seed: int) -> List[List[int]]:
    rng = random.Random(seed)
    point = [rng.randrange(2, _PRIME - 1) for _ in range(m.ring.n)]
    cache: dict = {}
    return [[_eval_mod(x, point, cache) if x else 0 for x in row] for row in m.rows]


def _rref_mod(rows: List[List[int]], ncols: int):
    """Reduced row echelon form mod p: ``(pivot column -> reduced row, source row indices)``."""
    pivots: Dict[int, List[int]] = {}
    sources = []
    for idx, row in enumerate(rows):
        v = list(row)
        for col, prow in pivots.items():
            if v[col]:
                f = v[col]
                v = [(a - f * b) % _PRIME for a, b in zip(v, prow)]
        lead = next((j for j, a in enumerate(v) if a), None)
        if lead is None:
            continue
        inv = pow(v[lead], -1, _PRIME)
        v = [a * inv % _PRIME for a in v]
        for col, prow in pivots.items():
            if prow[lead]:
                f = prow[lead]
                pivots[col] = [(a - f * b) % _PRIME for a, b in zip(prow, v)]
        pivots[lead] = v
        sources.append(idx)
        if len(pivots) == ncols:
            break
    return pivots, sources


def fundamental_circuits(image: List[List[int]], order: Sequence[int]) -> List[List[int]]:
    """Minimal dependent column sets of a matrix over GF(p), one per non-pivot column.

    Columns are eliminated in ``order``; each non-pivot column together with
    the earlier pivot columns it depends on forms a circuit.  The circuits
    carry a basis of the kernel.  Specializing can only lower the rank, so an
    empty result proves the polynomial matrix has full column rank.
    """
    permuted = [[row[j] for j in order] for row in image]
    pivots, _ = _rref_mod(permuted, len(order))
    out = []
    for f in range(len(order)):
        if f in pivots:
            continue
        cols = [f] + [c for c, row in pivots.items() if row[f]]
        out.append(sorted(order[c] for c in cols))
    return out


def _circuit_vector(m: PolyMatrix, image: List[List[int]], cols: List[int]) -> Optional[List[MultiPoly]]:
    ring = m.ring
    sub_image = [[row[j] for j in cols] for row in image]
    _, rows = _rref_mod(sub_image, len(cols))
    sub = PolyMatrix(ring, [[m.rows[i][j] for j in cols] for i in rows], len(cols)) if rows else None
    basis = nullspace(sub) if sub else [[ring.one()]]
    if len(basis) != 1:
        return None
    v = [ring.zero()] * m.ncols
    for j, x in zip(cols, basis[0]):
        v[j] = x
    if any(not x.is_zero() for x in m.apply(v)):
        return None
    return v


def kernel_circuits(m: PolyMatrix, order: Sequence[int], seed: int = 0) -> List[List[MultiPoly]]:
    """Exact kernel basis made of minimal-support vectors.

    A modular image picks the circuits; each one is solved exactly on its own
    columns and an independent row subset, then checked against every row.
    Any disagreement retries with a new evaluation point and finally falls
    back to elimination on the whole matrix.
    """
    for attempt in range(3):
        image = _modular_image(m, seed + attempt)
        circuits = fundamental_circuits(image, order)
        vecs = [_circuit_vector(m, image, c) for c in circuits]
        if all(v is not None for v in vecs):
            return vecs
    return nullspace(m)


# public entry points


def findRecurrences(f: Summand, structure) -> List[KFreeRecurrence]:
    """All basis recurrences supported on ``structure``, normalized, smallest support first."""
    if not isinstance(structure, StructureSet):
        structure = StructureSet(structure)
    ansatz = Ansatz(f, structure.tuples)
    table = f.table
    recs = [KFreeRecurrence(table.rec, table.sums, ansatz.coef_ring, ansatz.structure, sol)
            for sol in ansatz.solve()]
    recs.sort(key=_rank)
    return recs


def _rank(rec: KFreeRecurrence):
    return (len(rec.coeffs), rec.total_degree(), rec.support)


def findRecurrence(f: Summand, structure) -> Optional[KFreeRecurrence]:
    recs = findRecurrences(f, structure)
    return recs[0] if recs else None


def _lift(rec: KFreeRecurrence, ring: PolyRing):
    return {s: c.change_ring(ring) for s, c in rec.coeffs.items()}


def checkKFree(f: Summand, rec: KFreeRecurrence) -> bool:
    """Does ``sum_s c_s F(v - s) / F(v)`` vanish identically?

    Brings every term over one common denominator built from all denominator
    atoms, then expands the numerators; no summation/coefficient splitting and
    no linear algebra is involved.
    """
    table = f.table
    if tuple(rec.rec_vars) != table.rec or tuple(rec.sum_vars) != table.sums:
        raise CelineError("recurrence variables do not match the summand")
    return coefficient_terms_vanish(f, list(rec.coeffs.items()))


def coefficient_terms_vanish(f: Summand, terms: Sequence[Tuple[Shift, MultiPoly]]) -> bool:
    """Is ``sum c * F(v - shift) / F(v)`` identically zero, for ``(shift, c)`` in ``terms``?"""
    ring = f.table.generator_ring
    terms = [(f.shift_quotient(s), c.change_ring(ring)) for s, c in terms if c]
    if not terms:
        return True
    base = coprime_base(a for R, _ in terms for a, m in R.atoms.items() if m < 0)
    quotients = [_rewrite_all(R, base) for R, _ in terms]
    D = lcm_of(quotients, base)
    cleared = [R * D for R in quotients]
    low = [min([0] + [P.mono[i] for P in cleared]) for i in range(ring.n)]
    shift = QProduct(ring, 1, [-x for x in low])
    total = ring.zero()
    for P, (_, c) in zip(cleared, terms):
        total = total + (P * shift).expand() * c
    return total.is_zero()
