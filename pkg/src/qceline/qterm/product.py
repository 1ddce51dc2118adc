"""Factored rational functions: ``const * monomial * prod(atom ** mult)``.

Shift quotients of q-hypergeometric terms are products of binomials
``1 - c*q^e*X^f`` and a few tail polynomials.  Keeping them factored makes
reduction and least common multiples cheap: only small atoms are ever gcd'ed.

Atoms are integer-primitive polynomials with positive leading coefficient,
no monomial content and at least two terms.  The monomial may carry negative
exponents (Laurent).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..algebra import MultiPoly, PolyRing, RatFunc, poly_gcd
from ..algebra.polynomial import _norm


@lru_cache(maxsize=200_000)
def _atom_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    if not (a.var_mask() & b.var_mask()):
        return a.ring.one()
    return poly_gcd(a, b)


def atom_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    if a is b or a == b:
        return a
    return _atom_gcd(a, b) if hash(a) <= hash(b) else _atom_gcd(b, a)


class QProduct:
    __slots__ = ("ring", "const", "mono", "atoms")

    def __init__(self, ring: PolyRing, const=1, mono: Optional[Sequence[int]] = None,
                 atoms: Optional[Dict[MultiPoly, int]] = None):
        self.ring = ring
        self.const = _norm(Fraction(const)) if not isinstance(const, int) else const
        if not self.const:
            raise ZeroDivisionError("QProduct with zero constant")
        self.mono = tuple(mono) if mono is not None else (0,) * ring.n
        self.atoms = {a: m for a, m in (atoms or {}).items() if m}

    # constructors

    @classmethod
    def one(cls, ring: PolyRing) -> "QProduct":
        return cls(ring)

    @classmethod
    def monomial(cls, ring: PolyRing, exps: Sequence[int], const=1) -> "QProduct":
        return cls(ring, const, exps)

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "QProduct":
        ring = p.ring
        if p.is_zero():
            raise ZeroDivisionError("zero polynomial has no factored form")
        m = p.min_monomial()
        if m:
            p = p.div_monomial(m)
        mono = ring.unpack(m)
        if p.is_constant():
            return cls(ring, p.constant_value(), mono)
        prim = p.primitive()
        const = _norm(Fraction(p.lc()) / prim.lc())
        return cls(ring, const, mono, {prim: 1})

    @classmethod
    def one_minus(cls, ring: PolyRing, coeff, exps: Sequence[int]) -> "QProduct":
        """The binomial ``1 - coeff * X^exps`` with a Laurent exponent vector."""
        pos = [e if e > 0 else 0 for e in exps]
        neg = [-e if e < 0 else 0 for e in exps]
        if not any(exps):
            v = 1 - Fraction(coeff)
            if not v:
                raise ZeroDivisionError("factor 1 - q^0 vanishes identically")
            return cls(ring, v)
        # 1 - c P/N = (N - c P) / N
        poly = ring.monomial(neg) - ring.monomial(pos, coeff)
        out = cls.from_poly(poly)
        return out * cls(ring, 1, [-e for e in neg])

    # algebra

    def __mul__(self, other: "QProduct") -> "QProduct":
        atoms = dict(self.atoms)
        for a, m in other.atoms.items():
            atoms[a] = atoms.get(a, 0) + m
        return QProduct(self.ring, self.const * other.const,
                        [x + y for x, y in zip(self.mono, other.mono)], atoms)

    def inverse(self) -> "QProduct":
        return QProduct(self.ring, 1 / Fraction(self.const), [-x for x in self.mono],
                        {a: -m for a, m in self.atoms.items()})

    def __truediv__(self, other: "QProduct") -> "QProduct":
        return self * other.inverse()

    def __pow__(self, e: int) -> "QProduct":
        return QProduct(self.ring, Fraction(self.const) ** e, [x * e for x in self.mono],
                        {a: m * e for a, m in self.atoms.items()})

    def scale(self, c) -> "QProduct":
        return QProduct(self.ring, self.const * Fraction(c), self.mono, self.atoms)

    def is_unit(self) -> bool:
        return not self.atoms and not any(self.mono)

    # reduction

    def reduced(self) -> "QProduct":
        """Split atoms until numerator and denominator atoms are pairwise coprime."""
        out = QProduct(self.ring, self.const, self.mono, self.atoms)
        while True:
            hit = None
            nums = [a for a, m in out.atoms.items() if m > 0]
            dens = [a for a, m in out.atoms.items() if m < 0]
            for a in nums:
                for b in dens:
                    g = atom_gcd(a, b)
                    if not g.is_constant():
                        hit = (a, b, g)
                        break
                if hit:
                    break
            if hit is None:
                return out
            a, b, g = hit
            out = out._split(a, b, g)

    def _split(self, a: MultiPoly, b: MultiPoly, g: MultiPoly) -> "QProduct":
        ma, mb = self.atoms[a], self.atoms[b]
        atoms = dict(self.atoms)
        del atoms[a], atoms[b]
        rest = QProduct(self.ring, self.const, self.mono, atoms)
        for x, m in ((a, ma), (b, mb)):
            if x != g:
                rest = rest * (QProduct.from_poly(x.exquo(g)) ** m)
        return rest * (QProduct.from_poly(g) ** (ma + mb))

    # expansion

    def numerator_denominator(self) -> Tuple[MultiPoly, MultiPoly]:
        ring = self.ring
        num = ring.monomial([e if e > 0 else 0 for e in self.mono], self.const)
        den = ring.monomial([-e if e < 0 else 0 for e in self.mono])
        for a, m in sorted(self.atoms.items(), key=lambda t: len(t[0])):
            if m > 0:
                num = num * a ** m
            else:
                den = den * a ** (-m)
        return num, den

    def to_ratfunc(self) -> RatFunc:
        num, den = self.reduced().numerator_denominator()
        return RatFunc.from_coprime(num, den)

    def expand(self) -> MultiPoly:
        """Polynomial value; requires no denominator atoms and no negative exponents."""
        if any(m < 0 for m in self.atoms.values()) or any(e < 0 for e in self.mono):
            raise ValueError("QProduct has a denominator")
        return self.numerator_denominator()[0]

    def substitute_monomials(self, fn) -> "QProduct":
        """Apply a term-wise monomial map ``fn(exps, coeff) -> (exps, coeff)`` (Laurent allowed)."""
        out = QProduct(self.ring, self.const)
        e0, c0 = fn(self.mono, 1)
        out = out * QProduct(self.ring, c0, e0)
        for a, m in self.atoms.items():
            out = out * (laurent_poly_product(self.ring, [fn(exps, c) for exps, c in a.sorted_terms()]) ** m)
        return out

    def __repr__(self):
        parts = [str(self.const)]
        mono = "*".join(f"{g}^{e}" for g, e in zip(self.ring.gens, self.mono) if e)
        if mono:
            parts.append(mono)
        for a, m in self.atoms.items():
            parts.append(f"({a})^{m}")
        return "QProduct(" + " * ".join(parts) + ")"


def laurent_poly_product(ring: PolyRing, terms: Iterable[Tuple[Sequence[int], object]]) -> QProduct:
    """Factored form of a Laurent polynomial given as (exponents, coeff) pairs."""
    terms = [(tuple(e), c) for e, c in terms if c]
    if not terms:
        raise ZeroDivisionError("zero Laurent polynomial")
    low = [min(e[i] for e, _ in terms) for i in range(ring.n)]
    poly = ring.from_terms([([x - l for x, l in zip(e, low)], c) for e, c in terms])
    return QProduct.from_poly(poly) * QProduct(ring, 1, low)


def coprime_base(atoms: Iterable[MultiPoly]) -> List[MultiPoly]:
    """Refine atoms into a pairwise coprime family generating the same factors."""
    base = list(dict.fromkeys(atoms))
    changed = True
    while changed:
        changed = False
        for i in range(len(base)):
            for j in range(i + 1, len(base)):
                g = atom_gcd(base[i], base[j])
                if not g.is_constant():
                    a, b = base[i], base[j]
                    new = [x for k, x in enumerate(base) if k not in (i, j)]
                    for piece in (a.exquo(g), b.exquo(g), g):
                        if not piece.is_constant():
                            qp = QProduct.from_poly(piece)
                            new.extend(qp.atoms)
                    base = list(dict.fromkeys(new))
                    changed = True
                    break
            if changed:
                break
    return base


def rewrite_in_base(p: QProduct, base: Sequence[MultiPoly]) -> QProduct:
    """Express every atom of ``p`` as a product of base atoms."""
    out = QProduct(p.ring, p.const, p.mono)
    for a, m in p.atoms.items():
        if a in base:
            out = out * QProduct(p.ring, 1, None, {a: m})
            continue
        rest = a
        acc = QProduct(p.ring)
        for b in base:
            while len(rest) >= len(b) and not rest.is_constant():
                try:
                    rest2 = rest.exquo(b)
                except ArithmeticError:
                    break
                acc = acc * QProduct(p.ring, 1, None, {b: 1})
                rest = rest2
        if not rest.is_constant():
            raise ValueError(f"atom {a} not generated by the base")
        acc = acc.scale(rest.constant_value())
        out = out * (acc ** m)
    return out


def lcm_of(products: Sequence[QProduct], base: Sequence[MultiPoly]) -> QProduct:
    """Least common multiple of the *denominators*, as a QProduct with positive multiplicities."""
    ring = products[0].ring
    need: Dict[MultiPoly, int] = {}
    mono = [0] * ring.n
    for p in products:
        for a, m in p.atoms.items():
            if m < 0 and -m > need.get(a, 0):
                need[a] = -m
        for i, e in enumerate(p.mono):
            if -e > mono[i]:
                mono[i] = -e
    return QProduct(ring, 1, mono, need)
