"""Linear and quadratic forms over integer symbols.

A form is stored as a :class:`MultiPoly` over a ring whose generators are the
integer symbols (``L1``, ``ab``, ``k`` ...), with rational coefficients and
total degree at most two.  Forms can be written in a small expression
language::

    T(t) + T(ab) + T(ac) + T(bc-1)
    s*(M+2) - T(s) + T(i-s)

where ``T(x) = x(x+1)/2`` and names bound in ``defs`` expand to their
definitions.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Mapping, Optional

from ..algebra import MultiPoly, PolyRing


class FormError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def parse_form(text: str, ring: PolyRing, defs: Optional[Mapping[str, MultiPoly]] = None) -> MultiPoly:
    return _FormParser(text, ring, defs or {}).parse()


class _FormParser:
    def __init__(self, text, ring, defs):
        self.ring = ring
        self.defs = defs
        self.toks = []
        for num, name, op in _TOKEN.findall(text):
            if num:
                self.toks.append(("num", Fraction(num)))
            elif name:
                self.toks.append(("name", name))
            else:
                self.toks.append(("op", op))
        self.i = 0
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self):
        if not self.toks:
            raise FormError("empty form")
        p = self.expr()
        if self.i != len(self.toks):
            raise FormError(f"trailing input in {self.text!r}")
        if p.total_degree() > 2:
            raise FormError(f"{self.text!r} has degree above two")
        return p

    def expr(self):
        kind, val = self.peek()
        neg = False
        if kind == "op" and val in "+-":
            self.take()
            neg = val == "-"
        p = self.term()
        if neg:
            p = -p
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                p = p + t if val == "+" else p - t
            else:
                return p

    def term(self):
        p = self.unary()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                p = p * self.unary()
            elif kind == "op" and val == "/":
                self.take()
                d = self.unary()
                if not d.is_constant() or d.is_zero():
                    raise FormError("division by a non-constant in a form")
                p = p * (1 / Fraction(d.constant_value()))
            else:
                return p

    def unary(self):
        kind, val = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.unary()
        return self.atom()

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.ring.const(val)
        if kind == "name":
            nk, nv = self.peek()
            if nk == "op" and nv == "(":
                if val != "T":
                    raise FormError(f"unknown function {val!r}")
                self.take()
                x = self.expr()
                if self.take() != ("op", ")"):
                    raise FormError("unbalanced parenthesis")
                return x * (x + 1) * Fraction(1, 2)
            if val in self.defs:
                return self.defs[val]
            try:
                return self.ring.gen(val)
            except KeyError:
                raise FormError(f"unknown symbol {val!r}") from None
        if kind == "op" and val == "(":
            p = self.expr()
            if self.take() != ("op", ")"):
                raise FormError("unbalanced parenthesis")
            return p
        raise FormError(f"unexpected token {val!r} in {self.text!r}")


def linear_parts(form: MultiPoly) -> (Dict[str, Fraction], Fraction):
    """Coefficients and constant of a form of degree at most one."""
    if form.total_degree() > 1:
        raise FormError(f"{form} is not linear")
    ring = form.ring
    coeffs: Dict[str, Fraction] = {}
    const = Fraction(0)
    for exps, c in form.sorted_terms():
        if not any(exps):
            const = Fraction(c)
        else:
            coeffs[ring.gens[exps.index(1)]] = Fraction(c)
    return coeffs, const


def linform_to_json(form: MultiPoly) -> dict:
    coeffs, const = linear_parts(form)
    return {"coeffs": {k: str(v) for k, v in coeffs.items()}, "const": str(const)}


def linform_from_json(obj, ring: PolyRing, defs=None) -> MultiPoly:
    if isinstance(obj, str):
        form = parse_form(obj, ring, defs)
    elif isinstance(obj, (int, float)) and not isinstance(obj, bool):
        form = ring.const(Fraction(obj))
    else:
        form = ring.const(Fraction(obj.get("const", "0")))
        for name, c in obj.get("coeffs", {}).items():
            c = Fraction(c)
            if name in (defs or {}):
                form = form + defs[name] * c
            else:
                try:
                    form = form + ring.gen(name) * c
                except KeyError:
                    raise FormError(f"unknown symbol {name!r}") from None
    if form.total_degree() > 1:
        raise FormError(f"{form} is not linear")
    return form


def quadform_to_json(form: MultiPoly) -> dict:
    """Serialize as a symmetric matrix (upper triangle) plus a linear part."""
    ring = form.ring
    quad = []
    lin = ring.zero()
    for exps, c in form.sorted_terms():
        if sum(exps) == 2:
            idx = [i for i, e in enumerate(exps) for _ in range(e)]
            quad.append({"vars": [ring.gens[idx[0]], ring.gens[idx[1]]], "coeff": str(Fraction(c))})
        else:
            lin = lin + ring.monomial(exps, c)
    return {"quad": quad, "lin": linform_to_json(lin)}


def quadform_from_json(obj, ring: PolyRing, defs=None) -> MultiPoly:
    if isinstance(obj, str):
        return parse_form(obj, ring, defs)
    form = linform_from_json(obj.get("lin", {"const": "0"}), ring, defs)
    for entry in obj.get("quad", []):
        a, b = entry["vars"]
        fa = defs[a] if defs and a in defs else ring.gen(a)
        fb = defs[b] if defs and b in defs else ring.gen(b)
        form = form + fa * fb * Fraction(entry["coeff"])
    if form.total_degree() > 2:
        raise FormError("quadratic form of degree above two")
    return form


def check_integral_linear(form: MultiPoly, what: str) -> None:
    """Integer coefficients and integer constant, as needed for q-exponents and indices."""
    for _, c in form.sorted_terms():
        if Fraction(c).denominator != 1:
            raise FormError(f"{what}: non-integer coefficient in {form}")


def check_shift_integral(form: MultiPoly, what: str) -> None:
    """Q(v - s) - Q(v) must have integer coefficients for every integer shift s.

    For ``Q = sum a_xy x y + sum b_x x + c`` this means integer off-diagonal
    coefficients, ``2 a_xx`` integral and ``a_xx - b_x`` integral.
    """
    ring = form.ring
    diag: Dict[int, Fraction] = {}
    lin: Dict[int, Fraction] = {}
    for exps, c in form.sorted_terms():
        c = Fraction(c)
        deg = sum(exps)
        if deg == 2:
            nz = [i for i, e in enumerate(exps) if e]
            if len(nz) == 2:
                if c.denominator != 1:
                    raise FormError(f"{what}: non-integer cross coefficient in {form}")
            else:
                diag[nz[0]] = c
        elif deg == 1:
            lin[exps.index(1)] = c
    for i in set(diag) | set(lin):
        a = diag.get(i, Fraction(0))
        b = lin.get(i, Fraction(0))
        if (2 * a).denominator != 1 or (a - b).denominator != 1:
            raise FormError(f"{what}: shifts in {ring.gens[i]} give non-integer exponents in {form}")
