"""Exact Laurent polynomials in q, and in (q, a) for the Jacobi identity.

This module deliberately shares no code with :mod:`qceline.algebra`: it is the
second, independent route used to cross-check the symbolic engine.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

import numpy as np

_SAFE = 1 << 62


class QPoly:
    """``sum c[n] q^(offset + n)`` with exact coefficients, trimmed at both ends."""

    __slots__ = ("offset", "c")

    def __init__(self, coeffs: Iterable = (), offset: int = 0):
        c = coeffs if isinstance(coeffs, np.ndarray) else _array(list(coeffs))
        nz = np.flatnonzero(c)
        if nz.size == 0:
            self.c = np.zeros(0, dtype=np.int64)
            self.offset = 0
        else:
            self.c = c[nz[0]:nz[-1] + 1]
            self.offset = offset + int(nz[0])

    @classmethod
    def zero(cls) -> "QPoly":
        return cls()

    @classmethod
    def one(cls) -> "QPoly":
        return cls([1])

    @classmethod
    def monomial(cls, e: int, c=1) -> "QPoly":
        return cls([c], e)

    @classmethod
    def from_dict(cls, d: Mapping[int, object]) -> "QPoly":
        d = {e: c for e, c in d.items() if c}
        if not d:
            return cls()
        lo, hi = min(d), max(d)
        out = [0] * (hi - lo + 1)
        for e, c in d.items():
            out[e - lo] = c
        return cls(out, lo)

    def is_zero(self) -> bool:
        return self.c.size == 0

    def degree(self) -> int:
        return self.offset + self.c.size - 1 if self.c.size else -1

    def coeff(self, e: int):
        i = e - self.offset
        return _py(self.c[i]) if 0 <= i < self.c.size else 0

    def to_dict(self) -> Dict[int, object]:
        return {self.offset + i: _py(x) for i, x in enumerate(self.c) if x}

    def __add__(self, other: "QPoly") -> "QPoly":
        if not isinstance(other, QPoly):
            other = QPoly([other])
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.offset, other.offset)
        hi = max(self.offset + self.c.size, other.offset + other.c.size)
        dtype = object if object in (self.c.dtype, other.c.dtype) or _big(self.c, other.c, add=True) else np.int64
        out = np.zeros(hi - lo, dtype=dtype)
        out[self.offset - lo:self.offset - lo + self.c.size] += self.c.astype(dtype)
        out[other.offset - lo:other.offset - lo + other.c.size] += other.c.astype(dtype)
        return QPoly(out, lo)

    __radd__ = __add__

    def __neg__(self):
        return QPoly(-self.c, self.offset)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other) -> "QPoly":
        if not isinstance(other, QPoly):
            if other == 0:
                return QPoly()
            return QPoly(_array([_py(x) * other for x in self.c]), self.offset)
        if self.is_zero() or other.is_zero():
            return QPoly()
        a, b = self.c, other.c
        if a.dtype == object or b.dtype == object or _big(a, b):
            prod = np.convolve(a.astype(object), b.astype(object))
            return QPoly(_array(list(prod)), self.offset + other.offset)
        return QPoly(np.convolve(a, b), self.offset + other.offset)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QPoly":
        out = QPoly.one()
        for _ in range(e):
            out = out * self
        return out

    def shift(self, e: int) -> "QPoly":
        """Multiply by ``q^e``."""
        return QPoly(self.c, self.offset + e)

    def exact_div(self, other: "QPoly") -> "QPoly":
        """Exact division by a polynomial; raises if there is a remainder."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        num = [_py(x) for x in self.c]
        den = [_py(x) for x in other.c]
        if len(num) < len(den):
            if any(num):
                raise ArithmeticError("inexact polynomial division")
            return QPoly()
        quo = [0] * (len(num) - len(den) + 1)
        lead = den[-1]
        for i in range(len(quo) - 1, -1, -1):
            c = Fraction(num[i + len(den) - 1], lead)
            c = c.numerator if c.denominator == 1 else c
            quo[i] = c
            if c:
                for j, d in enumerate(den):
                    num[i + j] -= c * d
        if any(num):
            raise ArithmeticError("inexact polynomial division")
        return QPoly(_array(quo), self.offset - other.offset)

    def at_one(self):
        """Value at ``q = 1``."""
        return sum(_py(x) for x in self.c)

    def truncate(self, n: int) -> Dict[int, object]:
        """Coefficients of ``q^e`` for ``e <= n``."""
        return {e: c for e, c in self.to_dict().items() if e <= n}

    def __eq__(self, other):
        if not isinstance(other, QPoly):
            if isinstance(other, (int, Fraction)):
                other = QPoly([other])
            else:
                return NotImplemented
        return self.offset == other.offset and self.c.size == other.c.size and all(
            _py(x) == _py(y) for x, y in zip(self.c, other.c))

    def __hash__(self):
        return hash((self.offset, tuple(_py(x) for x in self.c)))

    def __repr__(self):
        return f"QPoly({self})"

    def __str__(self):
        d = self.to_dict()
        if not d:
            return "0"
        parts = []
        for e in sorted(d):
            c = d[e]
            mono = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _py(x):
    return int(x) if isinstance(x, np.integer) else x


def _array(vals) -> np.ndarray:
    if all(isinstance(v, (int, np.integer)) and -_SAFE < v < _SAFE for v in vals):
        return np.array(vals, dtype=np.int64)
    out = np.empty(len(vals), dtype=object)
    out[:] = [_py(v) for v in vals]
    return out


def _big(a: np.ndarray, b: np.ndarray, add: bool = False) -> bool:
    """Could an int64 product (or sum) overflow?"""
    sa = int(np.abs(a).sum()) if a.size else 0
    sb = int(np.abs(b).sum()) if b.size else 0
    return (sa + sb if add else sa * sb) >= _SAFE


class BiLaurent:
    """Laurent polynomial in ``q`` and one ground symbol ``a``: ``{(q_exp, a_exp): coeff}``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Tuple[int, int], object] = ()):
        self.terms = {k: v for k, v in dict(terms).items() if v}

    @classmethod
    def from_qpoly(cls, p: QPoly, a_exp: int = 0) -> "BiLaurent":
        return cls({(e, a_exp): c for e, c in p.to_dict().items()})

    def __add__(self, other: "BiLaurent") -> "BiLaurent":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return BiLaurent(out)

    def __neg__(self):
        return BiLaurent({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "BiLaurent":
        if isinstance(other, QPoly):
            other = BiLaurent.from_qpoly(other)
        if not isinstance(other, BiLaurent):
            return BiLaurent({k: v * other for k, v in self.terms.items()})
        out: Dict[Tuple[int, int], object] = {}
        for (q1, a1), c1 in self.terms.items():
            for (q2, a2), c2 in other.terms.items():
                k = (q1 + q2, a1 + a2)
                out[k] = out.get(k, 0) + c1 * c2
        return BiLaurent(out)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, BiLaurent):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (e, f), c in sorted(self.terms.items()):
            mono = "*".join(x for x in (
                "" if e == 0 else ("q" if e == 1 else f"q^{e}"),
                "" if f == 0 else ("a" if f == 1 else f"a^{f}")) if x)
            parts.append(str(c) if not mono else (mono if c == 1 else ("-" + mono if c == -1 else f"{c}*{mono}")))
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__
