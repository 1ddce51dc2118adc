"""Exact evaluation of a summand at an integer point.

Bound symbols are deformed, ``q^L -> q^L0 * Z``, and the value is the limit
``Z -> 1``.  Only the binomial factors ``1 - q^e Z^f`` with ``e = 0`` can
vanish at ``Z = 1``; everything else is evaluated directly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping, Sequence, Tuple

from ..algebra import MultiPoly, PolyRing
from ..algebra.polynomial import _norm
from .forms import linear_parts
from .product import QProduct
from .tail import Leaf, compile_tail


class EvaluationError(ArithmeticError):
    pass


class LaurentPoly:
    """Finitely supported map from integer exponent tuples to rationals."""

    __slots__ = ("gens", "terms")

    def __init__(self, gens: Sequence[str], terms: Mapping[Tuple[int, ...], object] = ()):
        self.gens = tuple(gens)
        self.terms = {tuple(e): _norm(Fraction(c)) for e, c in dict(terms).items() if c}

    @classmethod
    def from_poly(cls, p: MultiPoly, shift: Sequence[int] = None) -> "LaurentPoly":
        shift = shift or (0,) * p.ring.n
        return cls(p.ring.gens, {tuple(e + s for e, s in zip(exps, shift)): c for exps, c in p.sorted_terms()})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(self.gens, out)

    def __neg__(self):
        return LaurentPoly(self.gens, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LaurentPoly(self.gens, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        out: Dict[Tuple[int, ...], object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(self.gens, out)

    __rmul__ = __mul__

    def _check(self, other):
        if self.gens != other.gens:
            raise ValueError(f"generator mismatch {self.gens} vs {other.gens}")

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly(self.gens, {(0,) * len(self.gens): other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.gens == other.gens and self.terms == other.terms

    def __hash__(self):
        return hash((self.gens, frozenset(self.terms.items())))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(g if x == 1 else f"{g}^{x}" for g, x in zip(self.gens, e) if x)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


class _Collector:
    """Accumulates binomial factors ``1 - c X^e`` and the order of vanishing at Z = 1."""

    def __init__(self, ring: PolyRing):
        self.ring = ring
        self.prod = QProduct.one(ring)
        self.zero = False

    def binom(self, coeff, exps, mult: int):
        try:
            f = QProduct.one_minus(self.ring, coeff, exps)
        except ZeroDivisionError:
            if mult < 0:
                raise EvaluationError("a denominator factor vanishes") from None
            self.zero = True
            return
        self.prod = self.prod * (f ** mult)

    def mul(self, p: QProduct):
        self.prod = self.prod * p


def evaluate_summand(summand, assignment: Mapping[str, int]) -> LaurentPoly:
    table = summand.table
    missing = [v for v in table.integer_symbols if v not in assignment and table.class_of(v) != "deform"]
    if missing:
        raise EvaluationError(f"no value for {missing}")
    values = {v: int(assignment.get(v, 0)) for v in table.integer_symbols}
    deformed = set(summand.bounds) | set(table.deform)
    grounds = table.grounds
    ring = PolyRing(("q",) + grounds + ("Z",))
    zi = ring.n - 1

    def lin(form: MultiPoly) -> Tuple[int, int]:
        coeffs, const = linear_parts(form)
        val = const + sum(c * values[s] for s, c in coeffs.items())
        z = sum(c for s, c in coeffs.items() if s in deformed)
        if Fraction(val).denominator != 1 or Fraction(z).denominator != 1:
            raise EvaluationError(f"{form} is not integral at the point")
        return int(val), int(z)

    def exact(form: MultiPoly) -> int:
        val, z = lin(form)
        if z:
            raise EvaluationError(f"{form} depends on a bound and cannot be an index")
        return val

    def vec(qe=0, z=0, sym=None, sym_exp=1):
        v = [0] * ring.n
        v[0] = qe
        v[zi] = z
        if sym is not None:
            v[ring.index(sym)] += sym_exp
        return v

    from .summand import QBinom, QPoch, QPow, SymPow

    acc = _Collector(ring)
    for f in summand.factors:
        if isinstance(f, QPow):
            val = f.exponent.evaluate(values)
            if Fraction(val).denominator != 1:
                raise EvaluationError(f"q-power {f.exponent} is not integral at the point")
            acc.mul(QProduct.monomial(ring, vec(int(val))))
        elif isinstance(f, QBinom):
            m = exact(f.bottom)
            if m < 0:
                return LaurentPoly(ring.gens[:-1])
            n, zn = lin(f.top)
            d = f.base
            for r in range(1, m + 1):
                acc.binom(1, vec(d * (n - m + r), d * zn), 1)
                acc.binom(1, vec(d * r), -1)
        elif isinstance(f, QPoch):
            length = exact(f.length)
            a, za = lin(f.arg)
            if length >= 0:
                rng, mult = range(length), f.power
            else:
                rng, mult = range(-1, length - 1, -1), -f.power
            for r in rng:
                acc.binom(f.coeff, vec(a + r, za, f.symbol), mult)
        elif isinstance(f, SymPow):
            # a unit factor: its value at Z = 1 ignores any deformation
            e = lin(f.exponent)[0]
            if f.base == "-1":
                acc.mul(QProduct(ring, -1 if e % 2 else 1))
            else:
                acc.mul(QProduct.monomial(ring, vec(0, 0, f.base, e)))
        if acc.zero:
            return LaurentPoly(ring.gens[:-1])

    def leaf_value(leaf: Leaf):
        if not leaf.coeff:
            return None
        e, z = lin(leaf.qexp)
        return QProduct(ring, leaf.coeff, vec(e, z, leaf.symbol))

    tail = compile_tail(summand.tail, leaf_value)
    if tail is None:
        return LaurentPoly(ring.gens[:-1])
    acc.mul(tail)
    return _limit(acc.prod.reduced(), ring)


def _limit(p: QProduct, ring: PolyRing) -> LaurentPoly:
    """Value of a factored function of ``(q, grounds, Z)`` at ``Z = 1``."""
    target = PolyRing(ring.gens[:-1])
    zi = ring.n - 1
    z_minus_1 = ring.gen("Z") - 1
    order = 0
    out = QProduct(target, p.const, p.mono[:-1])
    for atom, m in p.atoms.items():
        a = atom
        k = 0
        while not a.subs({"Z": 1}):
            a = a.exquo(z_minus_1)
            k += 1
        order += k * m
        residue = a.subs({"Z": 1})
        out = out * (QProduct.from_poly(_drop_last(residue, target)) ** m)
    if order > 0:
        return LaurentPoly(target.gens)
    if order < 0:
        raise EvaluationError("the summand has a pole at this point")
    out = out.reduced()
    if any(m < 0 for m in out.atoms.values()):
        raise EvaluationError("value is not a Laurent polynomial")
    mono = out.mono
    num = QProduct(target, out.const, [0] * target.n, out.atoms).expand()
    return LaurentPoly.from_poly(num, mono)


def _drop_last(p: MultiPoly, target: PolyRing) -> MultiPoly:
    return target.from_terms((exps[:-1], c) for exps, c in p.sorted_terms())
