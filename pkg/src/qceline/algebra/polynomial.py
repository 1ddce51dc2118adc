"""Sparse multivariate polynomials over the rationals.

Monomials are packed into a single Python integer: one 32-bit field per
generator plus a leading total-degree field.  The packing makes monomial
multiplication an integer addition and makes integer comparison coincide with
the graded lexicographic order (first generator most significant).  The top
bit of every field is a guard bit used for divisibility tests, so exponents
must stay below ``2**31``.

Coefficients are stored as ``int`` whenever they are integral and as
``fractions.Fraction`` otherwise.
"""

from __future__ import annotations

import heapq
import re
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

Coeff = Union[int, Fraction]

_W = 32
_MASK = (1 << _W) - 1
_GUARD_BIT = 1 << (_W - 1)


def _norm(c: Coeff) -> Coeff:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _qdiv(a: Coeff, b: Coeff) -> Coeff:
    if type(a) is int and type(b) is int:
        if a % b == 0:
            return a // b
        return Fraction(a, b)
    return _norm(Fraction(a) / b)


class PolyRing:
    """An ordered tuple of generator names; the context of every polynomial."""

    __slots__ = ("gens", "n", "_shifts", "_deg_shift", "_guard", "_index")

    def __init__(self, gens: Sequence[str]):
        gens = tuple(gens)
        if len(set(gens)) != len(gens):
            raise ValueError(f"duplicate generators in {gens}")
        self.gens = gens
        self.n = len(gens)
        self._shifts = tuple((self.n - 1 - i) * _W for i in range(self.n))
        self._deg_shift = self.n * _W
        guard = 0
        for f in range(self.n + 1):
            guard |= _GUARD_BIT << (f * _W)
        self._guard = guard
        self._index = {g: i for i, g in enumerate(gens)}

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.gens == other.gens

    def __hash__(self):
        return hash(self.gens)

    def __repr__(self):
        return f"PolyRing({list(self.gens)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r} in {self.gens}") from None

    # monomial packing

    def pack(self, exps: Sequence[int]) -> int:
        m = 0
        deg = 0
        for e, sh in zip(exps, self._shifts):
            if e < 0 or e >= _GUARD_BIT:
                raise ValueError(f"exponent {e} out of range")
            m |= e << sh
            deg += e
        return m | (deg << self._deg_shift)

    def unpack(self, m: int) -> Tuple[int, ...]:
        return tuple((m >> sh) & _MASK for sh in self._shifts)

    def mono_degree(self, m: int) -> int:
        return m >> self._deg_shift

    def mono_divides(self, a: int, b: int) -> bool:
        """True iff monomial ``a`` divides monomial ``b``."""
        g = self._guard
        return ((b | g) - a) & g == g

    def mono_gcd(self, a: int, b: int) -> int:
        ea, eb = self.unpack(a), self.unpack(b)
        return self.pack([min(x, y) for x, y in zip(ea, eb)])

    def mono_lcm(self, a: int, b: int) -> int:
        ea, eb = self.unpack(a), self.unpack(b)
        return self.pack([max(x, y) for x, y in zip(ea, eb)])

    def var_mono(self, i: int, e: int = 1) -> int:
        return (e << self._shifts[i]) | (e << self._deg_shift)

    # constructors

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return MultiPoly(self, {0: 1})

    def const(self, c: Coeff) -> "MultiPoly":
        c = _norm(c)
        return MultiPoly(self, {0: c} if c else {})

    def gen(self, name: str) -> "MultiPoly":
        return MultiPoly(self, {self.var_mono(self.index(name)): 1})

    def monomial(self, exps: Union[Mapping[str, int], Sequence[int]], coeff: Coeff = 1) -> "MultiPoly":
        if isinstance(exps, Mapping):
            vec = [0] * self.n
            for name, e in exps.items():
                vec[self.index(name)] += e
            exps = vec
        coeff = _norm(coeff)
        return MultiPoly(self, {self.pack(exps): coeff} if coeff else {})

    def from_terms(self, terms: Iterable[Tuple[Sequence[int], Coeff]]) -> "MultiPoly":
        d: Dict[int, Coeff] = {}
        for exps, c in terms:
            m = self.pack(exps)
            d[m] = d.get(m, 0) + c
        return MultiPoly(self, {m: _norm(c) for m, c in d.items() if c})

    def parse(self, text: str) -> "MultiPoly":
        return _Parser(self, text).parse()


class MultiPoly:
    """Immutable sparse polynomial; ``terms`` maps packed monomials to coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Dict[int, Coeff]):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_value(self) -> Coeff:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get(0, 0)

    def lm(self) -> int:
        return max(self.terms)

    def lc(self) -> Coeff:
        return self.terms[max(self.terms)]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return self.ring.mono_degree(max(self.terms))

    def sorted_terms(self):
        """Terms in canonical (descending graded lex) order as (exponent tuple, coeff)."""
        unpack = self.ring.unpack
        return [(unpack(m), self.terms[m]) for m in sorted(self.terms, reverse=True)]

    def support_mask(self) -> int:
        acc = 0
        for m in self.terms:
            acc |= m
        return acc

    def var_mask(self) -> int:
        """Bit ``i`` is set iff generator ``i`` occurs."""
        mask = 0
        for i in self.variables():
            mask |= 1 << i
        return mask

    def variables(self) -> Tuple[int, ...]:
        """Indices of generators that occur in the polynomial."""
        acc = self.support_mask()
        return tuple(i for i, sh in enumerate(self.ring._shifts) if (acc >> sh) & _MASK)

    def degree(self, var: Union[int, str]) -> int:
        i = self.ring.index(var) if isinstance(var, str) else var
        sh = self.ring._shifts[i]
        if not self.terms:
            return -1
        return max((m >> sh) & _MASK for m in self.terms)

    def min_monomial(self) -> int:
        """The largest monomial dividing every term."""
        ring = self.ring
        it = iter(self.terms)
        mins = list(ring.unpack(next(it)))
        for m in it:
            for i, sh in enumerate(ring._shifts):
                e = (m >> sh) & _MASK
                if e < mins[i]:
                    mins[i] = e
        return ring.pack(mins)

    # arithmetic

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("polynomials over different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        r = dict(a)
        for m, c in b.items():
            v = r.get(m, 0) + c
            if v:
                r[m] = _norm(v)
            else:
                r.pop(m, None)
        return MultiPoly(self.ring, r)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        r = dict(self.terms)
        for m, c in other.terms.items():
            v = r.get(m, 0) - c
            if v:
                r[m] = _norm(v)
            else:
                r.pop(m, None)
        return MultiPoly(self.ring, r)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _norm(other)
            if not other:
                return self.ring.zero()
            return MultiPoly(self.ring, {m: _norm(c * other) for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if not a or not b:
            return self.ring.zero()
        if len(a) > len(b):
            a, b = b, a
        if len(a) == 1:
            (m1, c1), = a.items()
            if c1 == 1:
                return MultiPoly(self.ring, {m1 + m2: c2 for m2, c2 in b.items()})
            return MultiPoly(self.ring, {m1 + m2: _norm(c1 * c2) for m2, c2 in b.items()})
        r: Dict[int, Coeff] = {}
        get = r.get
        bitems = list(b.items())
        for m1, c1 in a.items():
            for m2, c2 in bitems:
                k = m1 + m2
                r[k] = get(k, 0) + c1 * c2
        return MultiPoly(self.ring, {m: _norm(c) for m, c in r.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def mul_monomial(self, m: int, c: Coeff = 1) -> "MultiPoly":
        if c == 1:
            return MultiPoly(self.ring, {k + m: v for k, v in self.terms.items()})
        return MultiPoly(self.ring, {k + m: _norm(v * c) for k, v in self.terms.items()})

    def div_monomial(self, m: int) -> "MultiPoly":
        """Exact division by a monomial (caller guarantees divisibility)."""
        return MultiPoly(self.ring, {k - m: v for k, v in self.terms.items()})

    def scale(self, c: Coeff) -> "MultiPoly":
        return self * c

    def exquo(self, other: "MultiPoly") -> "MultiPoly":
        """Exact quotient ``self / other``; raises ``ArithmeticError`` if inexact."""
        if not other.terms:
            raise ZeroDivisionError("polynomial division by zero")
        if not self.terms:
            return self
        ring = self.ring
        if len(other.terms) == 1:
            (dm, dc), = other.terms.items()
            out = {}
            for m, c in self.terms.items():
                if not ring.mono_divides(dm, m):
                    raise ArithmeticError("inexact polynomial division")
                out[m - dm] = _qdiv(c, dc)
            return MultiPoly(ring, out)
        dlm = max(other.terms)
        dlc = other.terms[dlm]
        drest = [(m - dlm, c) for m, c in other.terms.items() if m != dlm]
        rem = dict(self.terms)
        heap = [-m for m in rem]
        heapq.heapify(heap)
        quo: Dict[int, Coeff] = {}
        divides = ring.mono_divides
        push = heapq.heappush
        while heap:
            m = -heapq.heappop(heap)
            c = rem.pop(m, 0)
            if not c:
                continue
            while heap and heap[0] == -m:
                heapq.heappop(heap)
            if not divides(dlm, m):
                raise ArithmeticError("inexact polynomial division")
            t = _qdiv(c, dlc)
            qm = m - dlm
            quo[qm] = t
            for dm, dc in drest:
                k = m + dm
                old = rem.get(k)
                if old is None:
                    rem[k] = -t * dc
                    push(heap, -k)
                else:
                    rem[k] = old - t * dc
        return MultiPoly(ring, {m: _norm(c) for m, c in quo.items()})

    def divides(self, other: "MultiPoly") -> bool:
        try:
            other.exquo(self)
        except ArithmeticError:
            return False
        return True

    # content

    def content(self) -> Fraction:
        """Positive rational content: gcd of numerators over lcm of denominators."""
        num = 0
        den = 1
        for c in self.terms.values():
            if type(c) is int:
                num = gcd(num, c)
            else:
                num = gcd(num, c.numerator)
                den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "MultiPoly":
        """Integer-coefficient primitive associate with positive leading coefficient."""
        if not self.terms:
            return self
        c = self.content()
        if self.lc() < 0:
            c = -c
        if c == 1:
            return self
        inv = 1 / c
        return MultiPoly(self.ring, {m: _norm(v * inv) for m, v in self.terms.items()})

    def is_integral(self) -> bool:
        return all(type(c) is int for c in self.terms.values())

    # univariate views

    def to_univariate(self, i: int) -> Dict[int, "MultiPoly"]:
        """Split as ``sum_e coeff_e * x_i**e`` with ``coeff_e`` free of ``x_i``."""
        ring = self.ring
        sh = ring._shifts[i]
        dsh = ring._deg_shift
        parts: Dict[int, Dict[int, Coeff]] = {}
        for m, c in self.terms.items():
            e = (m >> sh) & _MASK
            if e:
                m = m - (e << sh) - (e << dsh)
            parts.setdefault(e, {})[m] = c
        return {e: MultiPoly(ring, d) for e, d in parts.items()}

    @staticmethod
    def from_univariate(ring: PolyRing, i: int, parts: Mapping[int, "MultiPoly"]) -> "MultiPoly":
        out: Dict[int, Coeff] = {}
        for e, p in parts.items():
            xm = ring.var_mono(i, e) if e else 0
            for m, c in p.terms.items():
                out[m + xm] = c
        return MultiPoly(ring, out)

    # substitution and evaluation

    def subs(self, assignment: Mapping[str, Union[Coeff, "MultiPoly"]]) -> "MultiPoly":
        """Substitute generators by constants or polynomials of the same ring."""
        ring = self.ring
        idx = {ring.index(k): v for k, v in assignment.items()}
        if not idx:
            return self
        cache: Dict[Tuple[int, int], MultiPoly] = {}

        def power(i, e):
            key = (i, e)
            p = cache.get(key)
            if p is None:
                v = idx[i]
                p = (v ** e) if isinstance(v, MultiPoly) else ring.const(Fraction(v) ** e)
                cache[key] = p
            return p

        acc: Dict[int, Coeff] = {}
        result = ring.zero()
        for m, c in self.terms.items():
            exps = ring.unpack(m)
            keep = [0 if i in idx else e for i, e in enumerate(exps)]
            factor = None
            for i, e in enumerate(exps):
                if e and i in idx:
                    pw = power(i, e)
                    factor = pw if factor is None else factor * pw
            km = ring.pack(keep)
            if factor is None:
                acc[km] = acc.get(km, 0) + c
            else:
                result = result + factor.mul_monomial(km, c)
        if acc:
            result = result + MultiPoly(ring, {m: _norm(c) for m, c in acc.items() if c})
        return result

    def evaluate(self, values: Mapping[str, Coeff]) -> Coeff:
        p = self.subs(values)
        if not p.is_constant():
            raise ValueError("evaluation left free generators")
        return p.constant_value()

    def change_ring(self, ring: PolyRing) -> "MultiPoly":
        """Re-express in a ring whose generators include all occurring ones."""
        src = self.ring
        if ring == src:
            return self
        used = set(self.variables())
        mapping = [ring.index(g) if i in used else -1 for i, g in enumerate(src.gens)]
        out: Dict[int, Coeff] = {}
        for m, c in self.terms.items():
            exps = src.unpack(m)
            vec = [0] * ring.n
            for i, e in enumerate(exps):
                if e:
                    vec[mapping[i]] = e
            out[ring.pack(vec)] = c
        return MultiPoly(ring, out)

    # comparison / display

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.terms.get(0, 0) == other
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.gens, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        return format_poly(self)


def format_monomial(gens: Sequence[str], exps: Sequence[int]) -> str:
    parts = []
    for g, e in zip(gens, exps):
        if e == 1:
            parts.append(g)
        elif e:
            parts.append(f"{g}^{e}")
    return "*".join(parts)


def format_poly(p: MultiPoly) -> str:
    if not p.terms:
        return "0"
    out = []
    for exps, c in p.sorted_terms():
        mono = format_monomial(p.ring.gens, exps)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        out.append((sign, body))
    first_sign, first = out[0]
    s = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class _Parser:
    """Recursive-descent parser for ``+ - * / ^ ( )``, integers and generator names.

    ``/`` is accepted only with a constant right operand.
    """

    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.tokens = []
        for num, name, op in _TOKEN.findall(text):
            if num:
                self.tokens.append(("num", int(num)))
            elif name:
                self.tokens.append(("name", name))
            elif op.strip():
                self.tokens.append(("op", op))
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self) -> MultiPoly:
        if not self.tokens:
            raise ValueError("empty polynomial expression")
        p = self.expr()
        if self.pos != len(self.tokens):
            raise ValueError(f"trailing input at token {self.peek()}")
        return p

    def expr(self):
        kind, val = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        p = self.term() * sign
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                p = p + t if val == "+" else p - t
            else:
                return p

    def term(self):
        p = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                p = p * self.factor()
            elif kind == "op" and val == "/":
                self.take()
                d = self.factor()
                if not d.is_constant() or d.is_zero():
                    raise ValueError("division by a non-constant")
                p = p * (Fraction(1) / Fraction(d.constant_value()))
            else:
                return p

    def factor(self):
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, e = self.take()
            if kind != "num":
                raise ValueError("exponent must be a non-negative integer")
            return base ** e
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.ring.const(val)
        if kind == "name":
            return self.ring.gen(val)
        if kind == "op" and val == "(":
            p = self.expr()
            if self.take() != ("op", ")"):
                raise ValueError("unbalanced parenthesis")
            return p
        if kind == "op" and val == "-":
            return -self.factor()
        raise ValueError(f"unexpected token {val!r}")
