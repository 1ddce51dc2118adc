"""Rational tails: expression trees whose leaves are ``c * q^(linear form)``.

Text syntax (a superset of what the summand fixtures use)::

    q^bc + (1-q^a)/(1-q^(L1-t+a)) * (1-q^bc)/(1-q^(M-t-bc+1))

A leaf is a rational number or ground symbol times a power of ``q``; inner
nodes are ``+ - * /``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Tuple, Union

from ..algebra import MultiPoly, PolyRing
from .forms import FormError, linform_from_json, linform_to_json, parse_form
from .product import QProduct


@dataclass(frozen=True)
class Leaf:
    coeff: Fraction
    symbol: Optional[str]
    qexp: MultiPoly  # linear form over the symbol ring


@dataclass(frozen=True)
class Node:
    op: str
    args: Tuple["Expr", ...]


Expr = Union[Leaf, Node]


def leaves(expr: Expr):
    if isinstance(expr, Leaf):
        yield expr
    else:
        for a in expr.args:
            yield from leaves(a)


def qpower_leaves(expr: Expr):
    """Distinct non-constant q-exponents among the leaves."""
    seen = []
    for leaf in leaves(expr):
        if not leaf.qexp.is_constant() and leaf.qexp not in seen:
            seen.append(leaf.qexp)
    return seen


def map_forms(expr: Expr, fn: Callable[[MultiPoly], MultiPoly]) -> Expr:
    if isinstance(expr, Leaf):
        return Leaf(expr.coeff, expr.symbol, fn(expr.qexp))
    return Node(expr.op, tuple(map_forms(a, fn) for a in expr.args))


def tail_to_json(expr: Expr):
    if isinstance(expr, Leaf):
        return {"leaf": {"coeff": str(expr.coeff), "symbol": expr.symbol, "qexp": linform_to_json(expr.qexp)}}
    return {"op": expr.op, "args": [tail_to_json(a) for a in expr.args]}


def tail_from_json(obj, ring: PolyRing, grounds, defs=None) -> Expr:
    if isinstance(obj, str):
        return parse_tail(obj, ring, grounds, defs)
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return Leaf(Fraction(obj), None, ring.zero())
    if "leaf" in obj:
        leaf = obj["leaf"]
        sym = leaf.get("symbol")
        if sym is not None and sym not in grounds:
            raise FormError(f"unknown ground symbol {sym!r} in tail")
        return Leaf(Fraction(leaf.get("coeff", "1")), sym,
                    linform_from_json(leaf.get("qexp", {"const": "0"}), ring, defs))
    op = obj.get("op")
    if op not in ("+", "-", "*", "/"):
        raise FormError(f"malformed tail node {obj!r}")
    args = tuple(tail_from_json(a, ring, grounds, defs) for a in obj["args"])
    if not args or (op in "-/" and len(args) != 2):
        raise FormError(f"malformed tail node {obj!r}")
    return Node(op, args)


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def parse_tail(text: str, ring: PolyRing, grounds, defs=None) -> Expr:
    return _TailParser(text, ring, grounds, defs or {}).parse()


class _TailParser:
    def __init__(self, text, ring, grounds, defs):
        self.text = text
        self.ring = ring
        self.grounds = set(grounds)
        self.defs = defs
        self.toks = []
        for num, name, op in _TOKEN.findall(text):
            if num:
                self.toks.append(("num", num))
            elif name:
                self.toks.append(("name", name))
            else:
                self.toks.append(("op", op))
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self) -> Expr:
        if not self.toks:
            raise FormError("empty tail")
        e = self.expr()
        if self.i != len(self.toks):
            raise FormError(f"malformed tail {self.text!r}")
        return e

    def expr(self):
        kind, val = self.peek()
        if kind == "op" and val == "-":
            self.take()
            e = Node("*", (Leaf(Fraction(-1), None, self.ring.zero()), self.term()))
        else:
            if kind == "op" and val == "+":
                self.take()
            e = self.term()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                e = Node(val, (e, self.term()))
            else:
                return e

    def term(self):
        e = self.atom()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                e = Node(val, (e, self.atom()))
            elif kind in ("name", "num") or (kind == "op" and val == "("):
                # juxtaposition, as in "2 q^a" or "alpha q^k"
                e = Node("*", (e, self.atom()))
            else:
                return e

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return Leaf(Fraction(val), None, self.ring.zero())
        if kind == "op" and val == "(":
            e = self.expr()
            if self.take() != ("op", ")"):
                raise FormError(f"unbalanced parenthesis in {self.text!r}")
            return e
        if kind == "name" and val == "q":
            nk, nv = self.peek()
            if nk == "op" and nv == "^":
                self.take()
                return Leaf(Fraction(1), None, self.exponent())
            return Leaf(Fraction(1), None, self.ring.const(1))
        if kind == "name" and val in self.grounds:
            return Leaf(Fraction(1), val, self.ring.zero())
        raise FormError(f"unexpected {val!r} in tail {self.text!r}")

    def exponent(self) -> MultiPoly:
        kind, val = self.take()
        if kind == "num":
            return self.ring.const(Fraction(val))
        if kind == "op" and val == "-":
            return -self.exponent()
        if kind == "name":
            return parse_form(val, self.ring, self.defs)
        if kind == "op" and val == "(":
            depth = 1
            start = self.i
            while depth:
                k, v = self.take()
                if k is None:
                    raise FormError(f"unbalanced parenthesis in {self.text!r}")
                if k == "op" and v == "(":
                    depth += 1
                elif k == "op" and v == ")":
                    depth -= 1
            inner = " ".join(str(v) for _, v in self.toks[start:self.i - 1])
            form = parse_form(inner, self.ring, self.defs)
            if form.total_degree() > 1:
                raise FormError("tail exponents must be linear")
            return form
        raise FormError(f"bad exponent in tail {self.text!r}")


def compile_tail(expr: Expr, leaf_value: Callable[[Leaf], QProduct]) -> Optional[QProduct]:
    """Evaluate the tree into a factored rational function; ``None`` means zero."""
    if isinstance(expr, Leaf):
        return leaf_value(expr)
    vals = [compile_tail(a, leaf_value) for a in expr.args]
    op = expr.op
    if op == "*":
        if any(v is None for v in vals):
            return None
        out = vals[0]
        for v in vals[1:]:
            out = out * v
        return out
    if op == "/":
        num, den = vals
        if den is None:
            raise ZeroDivisionError("tail divides by zero")
        return None if num is None else num / den
    if op == "-":
        a, b = vals
        vals = [a, None if b is None else b.scale(-1)]
    return add_products([v for v in vals if v is not None])


def add_products(vals) -> Optional[QProduct]:
    if not vals:
        return None
    if len(vals) == 1:
        return vals[0]
    ring = vals[0].ring
    # common denominator: every denominator atom at its largest multiplicity
    den_atoms = {}
    low = [0] * ring.n
    for v in vals:
        for a, m in v.atoms.items():
            if m < 0:
                den_atoms[a] = max(den_atoms.get(a, 0), -m)
        low = [min(x, y) for x, y in zip(low, v.mono)]
    common = QProduct(ring, 1, low, {a: -m for a, m in den_atoms.items()})
    total = ring.zero()
    for v in vals:
        total = total + (v / common).expand()
    if total.is_zero():
        return None
    return (QProduct.from_poly(total) * common).reduced()
