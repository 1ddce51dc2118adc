"""Fraction-free linear algebra over multivariate polynomial rings."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence

from .gcd import poly_gcd_many
from .polynomial import MultiPoly, PolyRing


class PolyMatrix:
    """Dense rectangular matrix of :class:`MultiPoly` entries."""

    def __init__(self, ring: PolyRing, rows: Sequence[Sequence[MultiPoly]], ncols: Optional[int] = None):
        self.ring = ring
        self.rows = [list(r) for r in rows]
        if ncols is None:
            if not self.rows:
                raise ValueError("column count required for an empty matrix")
            ncols = len(self.rows[0])
        self.ncols = ncols
        for r in self.rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")

    @classmethod
    def parse(cls, ring: PolyRing, rows: Sequence[Sequence[str]]) -> "PolyMatrix":
        return cls(ring, [[ring.parse(x) if isinstance(x, str) else ring.const(x) for x in r] for r in rows])

    @property
    def shape(self):
        return len(self.rows), self.ncols

    def apply(self, vec: Sequence[MultiPoly]) -> List[MultiPoly]:
        """Matrix-vector product."""
        out = []
        for row in self.rows:
            acc = self.ring.zero()
            for a, x in zip(row, vec):
                if a and x:
                    acc = acc + a * x
            out.append(acc)
        return out


def _pivot_key(p: MultiPoly):
    return (len(p), p.total_degree())


def nullspace(m: PolyMatrix) -> List[List[MultiPoly]]:
    """Basis of the right nullspace over the fraction field.

    Fraction-free Gauss-Jordan elimination (every division is exact), pivoting
    on the entry with fewest terms.  Each returned vector is polynomial,
    content-free and has a positive leading coefficient in its first nonzero
    entry; vectors are sorted by their support.
    """
    ring = m.ring
    n = m.ncols
    rows = [list(r) for r in m.rows if any(not x.is_zero() for x in r)]
    prev = ring.one()
    pivot_of_row = {}
    pivot_cols = set()
    free_rows = set(range(len(rows)))
    while True:
        best = None
        for i in free_rows:
            row = rows[i]
            for j in range(n):
                if j in pivot_cols:
                    continue
                x = row[j]
                if x.is_zero():
                    continue
                key = (_pivot_key(x), i, j)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        _, r, c = best
        p = rows[r][c]
        prow = rows[r]
        trivial_prev = prev == 1
        for i in range(len(rows)):
            if i == r:
                continue
            row = rows[i]
            a = row[c]
            new = []
            for j in range(n):
                x = row[j]
                y = prow[j]
                if a.is_zero():
                    v = x * p if x else x
                elif y.is_zero():
                    v = x * p if x else x
                else:
                    v = x * p - a * y
                if v and not trivial_prev:
                    v = v.exquo(prev)
                new.append(v)
            rows[i] = new
        pivot_of_row[r] = c
        pivot_cols.add(c)
        free_rows.discard(r)
        # rows that vanished carry no information
        for i in list(free_rows):
            if all(x.is_zero() for x in rows[i]):
                free_rows.discard(i)
        prev = p
    d = prev
    basis = []
    for f in range(n):
        if f in pivot_cols:
            continue
        vec = [ring.zero()] * n
        vec[f] = d
        for r, c in pivot_of_row.items():
            vec[c] = -rows[r][f]
        basis.append(normalize_vector(vec))
    basis.sort(key=lambda v: tuple(i for i, x in enumerate(v) if not x.is_zero()))
    return basis


def normalize_vector(vec: List[MultiPoly]) -> List[MultiPoly]:
    """Divide out the polynomial content; make the first nonzero entry's leading coefficient positive."""
    g = poly_gcd_many(vec)
    out = [x.exquo(g) if x else x for x in vec]
    c = vector_content(out)
    if c != 1:
        out = [x * (1 / c) for x in out]
    for x in out:
        if x:
            if x.lc() < 0:
                out = [-y for y in out]
            break
    return out


def vector_content(vec: Sequence[MultiPoly]) -> Fraction:
    """Positive rational content shared by all entries."""
    num, den = 0, 1
    for x in vec:
        if x:
            c = x.content()
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
    return Fraction(num, den)
