"""Reduced rational functions over a :class:`PolyRing`."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .gcd import poly_gcd
from .polynomial import MultiPoly


class RatFunc:
    """``num / den`` in lowest terms.

    Canonical form: both parts have integer coefficients whose combined content
    is 1, ``gcd(num, den) = 1``, the leading coefficient of ``den`` is positive,
    and zero is ``0/1``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly, *, reduced: bool = False):
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    @classmethod
    def from_coprime(cls, num: MultiPoly, den: MultiPoly) -> "RatFunc":
        """Build from parts already known to be coprime; only units are normalized."""
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        return cls(*_normalize_units(num, den), reduced=True)

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RatFunc":
        return cls(p, p.ring.one())

    @property
    def ring(self):
        return self.num.ring

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == self.den

    def __add__(self, other):
        other = self._coerce(other)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        num = self.num.exquo(g1) * other.num.exquo(g2)
        den = self.den.exquo(g2) * other.den.exquo(g1)
        return RatFunc(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.num ** e, self.den ** e, reduced=True)

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MultiPoly):
            return RatFunc.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc.from_poly(self.ring.const(other))
        raise TypeError(f"cannot combine RatFunc with {type(other).__name__}")

    def subs(self, assignment) -> "RatFunc":
        return RatFunc(self.num.subs(assignment), self.den.subs(assignment))

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            try:
                other = self._coerce(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc(({self.num}) / ({self.den}))"

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"


def _clear_denominators(p: MultiPoly) -> int:
    d = 1
    for c in p.terms.values():
        if type(c) is Fraction:
            d = d * c.denominator // gcd(d, c.denominator)
    return d


def _reduce(num: MultiPoly, den: MultiPoly):
    ring = num.ring
    if num.is_zero():
        return ring.zero(), ring.one()
    g = poly_gcd(num, den)
    if not g.is_constant():
        num, den = num.exquo(g), den.exquo(g)
    return _normalize_units(num, den)


def _normalize_units(num: MultiPoly, den: MultiPoly):
    ring = num.ring
    if num.is_zero():
        return ring.zero(), ring.one()
    scale = _clear_denominators(num) * _clear_denominators(den)
    scale //= gcd(_clear_denominators(num), _clear_denominators(den))
    if scale != 1:
        num, den = num * scale, den * scale
    c = gcd(int(num.content()), int(den.content()))
    if den.lc() < 0:
        c = -c
    if c != 1:
        inv = Fraction(1, c)
        num, den = num * inv, den * inv
    return num, den


def rat_reduce(num: MultiPoly, den: MultiPoly) -> RatFunc:
    """Canonical reduced form of ``num / den``."""
    return RatFunc(num, den)
