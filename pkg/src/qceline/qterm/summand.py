"""Symbolic q-hypergeometric summands and their shift quotients."""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from ..algebra import MultiPoly, PolyRing, RatFunc
from .forms import (
    FormError,
    check_integral_linear,
    check_shift_integral,
    linear_parts,
    linform_from_json,
    linform_to_json,
    parse_form,
    quadform_from_json,
    quadform_to_json,
)
from .product import QProduct
from .tail import Expr, Leaf, compile_tail, map_forms, qpower_leaves, tail_from_json, tail_to_json

SCHEMA_VERSION = 1

CLASSES = ("rec", "sum", "param", "ground", "deform")


def gen_name(symbol: str) -> str:
    """Name of the generator standing for ``q^symbol``."""
    return "q_" + symbol


@dataclass(frozen=True)
class VarTable:
    """Ordered, classified symbols.

    ``deform`` symbols are internal: they always have value 0, never shift,
    and only serve to take limits when a summand is evaluated at a point
    where its rational tail is singular.
    """

    entries: Tuple[Tuple[str, str], ...]

    def __post_init__(self):
        names = [n for n, _ in self.entries]
        if len(set(names)) != len(names):
            raise FormError(f"duplicate symbols in {names}")
        for name, cls in self.entries:
            if cls not in CLASSES:
                raise FormError(f"unknown class {cls!r} for {name!r}")
            if name == "q" or name == "T":
                raise FormError(f"{name!r} is reserved")

    def of(self, cls: str) -> Tuple[str, ...]:
        return tuple(n for n, c in self.entries if c == cls)

    @property
    def rec(self):
        return self.of("rec")

    @property
    def sums(self):
        return self.of("sum")

    @property
    def params(self):
        return self.of("param")

    @property
    def grounds(self):
        return self.of("ground")

    @property
    def deform(self):
        return self.of("deform")

    def class_of(self, name: str) -> str:
        for n, c in self.entries:
            if n == name:
                return c
        raise KeyError(name)

    @property
    def shiftable(self) -> Tuple[str, ...]:
        return self.rec + self.sums

    @cached_property
    def integer_symbols(self) -> Tuple[str, ...]:
        return tuple(n for n, c in self.entries if c != "ground")

    @cached_property
    def symbol_ring(self) -> PolyRing:
        return PolyRing(self.integer_symbols)

    @cached_property
    def generator_ring(self) -> PolyRing:
        """q, coefficient generators, ground symbols, then elimination generators."""
        gens = ["q"] + [gen_name(v) for v in self.rec + self.params] + list(self.grounds)
        gens += [gen_name(v) for v in self.sums]
        return PolyRing(gens)

    @cached_property
    def n_coefficient_gens(self) -> int:
        return 1 + len(self.rec) + len(self.params) + len(self.grounds)

    def to_json(self):
        return [{"name": n, "class": c} for n, c in self.entries]

    @classmethod
    def from_json(cls, obj) -> "VarTable":
        try:
            return cls(tuple((e["name"], e["class"]) for e in obj))
        except (KeyError, TypeError):
            raise FormError("malformed variable table") from None


# factors


@dataclass(frozen=True)
class QPow:
    exponent: MultiPoly

    def map(self, fn):
        return QPow(fn(self.exponent))


@dataclass(frozen=True)
class QBinom:
    top: MultiPoly
    bottom: MultiPoly
    base: int = 1

    def map(self, fn):
        return QBinom(fn(self.top), fn(self.bottom), self.base)


@dataclass(frozen=True)
class QPoch:
    """``(c * g * q^arg; q)_length ** power`` with optional ground symbol ``g``."""

    arg: MultiPoly
    length: MultiPoly
    coeff: Fraction = Fraction(1)
    symbol: Optional[str] = None
    power: int = 1

    def map(self, fn):
        return replace(self, arg=fn(self.arg), length=fn(self.length))


@dataclass(frozen=True)
class SymPow:
    base: str  # a ground symbol or "-1"
    exponent: MultiPoly

    def map(self, fn):
        return SymPow(self.base, fn(self.exponent))


Factor = Union[QPow, QBinom, QPoch, SymPow]


def factor_to_json(f: Factor) -> dict:
    if isinstance(f, QPow):
        return {"kind": "qpow", "exponent": quadform_to_json(f.exponent)}
    if isinstance(f, QBinom):
        return {"kind": "qbinom", "top": linform_to_json(f.top), "bottom": linform_to_json(f.bottom), "base": f.base}
    if isinstance(f, QPoch):
        return {"kind": "qpoch", "arg": {"exponent": linform_to_json(f.arg), "coeff": str(f.coeff), "symbol": f.symbol},
                "length": linform_to_json(f.length), "power": f.power}
    return {"kind": "sympow", "base": f.base, "exponent": linform_to_json(f.exponent)}


def factor_from_json(obj, ring: PolyRing, grounds, defs) -> Factor:
    kind = obj.get("kind")
    if kind == "qpow":
        return QPow(quadform_from_json(obj["exponent"], ring, defs))
    if kind == "qbinom":
        base = obj.get("base", 1)
        if not isinstance(base, int) or base < 1:
            raise FormError(f"q-binomial base exponent must be a positive integer, got {base!r}")
        return QBinom(linform_from_json(obj["top"], ring, defs), linform_from_json(obj["bottom"], ring, defs), base)
    if kind == "qpoch":
        arg = obj.get("arg", {})
        sym = arg.get("symbol")
        if sym is not None and sym not in grounds:
            raise FormError(f"unknown ground symbol {sym!r}")
        power = obj.get("power", 1)
        if power not in (1, -1):
            raise FormError("q-Pochhammer power must be 1 or -1")
        coeff = Fraction(arg.get("coeff", "1"))
        if not coeff:
            raise FormError("q-Pochhammer argument must be nonzero")
        return QPoch(linform_from_json(arg.get("exponent", {"const": "0"}), ring, defs),
                     linform_from_json(obj["length"], ring, defs), coeff, sym, power)
    if kind == "sympow":
        base = str(obj["base"])
        if base != "-1" and base not in grounds:
            raise FormError(f"unknown ground symbol {base!r}")
        return SymPow(base, linform_from_json(obj["exponent"], ring, defs))
    raise FormError(f"unknown factor kind {kind!r}")


def _forms(f: Factor):
    if isinstance(f, QPow):
        return [f.exponent]
    if isinstance(f, QBinom):
        return [f.top, f.bottom]
    if isinstance(f, QPoch):
        return [f.arg, f.length]
    return [f.exponent]


class Summand:
    """``prod(factors) * tail`` over a classified variable table.

    ``bounds`` lists symbols whose value is taken as a limit when the summand
    is evaluated at a point (the rational tail may be 0/0 there).
    """

    def __init__(self, table: VarTable, factors: Sequence[Factor], tail: Optional[Expr] = None,
                 name: str = "", bounds: Sequence[str] = ()):
        self.table = table
        ring = table.symbol_ring
        self.factors = tuple(factors)
        self.tail = tail if tail is not None else Leaf(Fraction(1), None, ring.zero())
        self.name = name
        self.bounds = tuple(bounds)
        for b in self.bounds:
            if b not in table.integer_symbols:
                raise FormError(f"bound {b!r} is not an integer symbol")
        self._validate()
        self._cache: Dict[Tuple[int, ...], QProduct] = {}

    def _validate(self):
        ring = self.table.symbol_ring
        for f in self.factors:
            for form in _forms(f):
                if form.ring != ring:
                    raise FormError("factor form over a foreign ring")
            if isinstance(f, QPow):
                check_shift_integral(f.exponent, "q-power")
            else:
                for form in _forms(f):
                    if form.total_degree() > 1:
                        raise FormError(f"{form} must be linear")
                    check_integral_linear(form, type(f).__name__)
        from .tail import leaves
        for leaf in leaves(self.tail):
            if leaf.qexp.ring != ring:
                raise FormError("tail form over a foreign ring")
            check_integral_linear(leaf.qexp, "tail exponent")
            if leaf.symbol is not None and leaf.symbol not in self.table.grounds:
                raise FormError(f"unknown ground symbol {leaf.symbol!r}")

    # serialization

    @classmethod
    def from_json(cls, doc) -> "Summand":
        if not isinstance(doc, dict):
            raise FormError("summand document must be an object")
        table = VarTable.from_json(doc.get("variables", []))
        ring = table.symbol_ring
        defs: Dict[str, MultiPoly] = {}
        for sub in doc.get("substitutions", []):
            name = sub["name"]
            if name in table.integer_symbols or name in table.grounds:
                raise FormError(f"substitution {name!r} shadows a variable")
            defs[name] = linform_from_json(sub["linform"], ring, defs)
        factors = [factor_from_json(f, ring, table.grounds, defs) for f in doc.get("factors", [])]
        tail = tail_from_json(doc.get("tail", 1), ring, table.grounds, defs)
        return cls(table, factors, tail, doc.get("name", ""), doc.get("bounds", []))

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "summand",
            "name": self.name,
            "variables": self.table.to_json(),
            "bounds": list(self.bounds),
            "substitutions": [],
            "factors": [factor_to_json(f) for f in self.factors],
            "tail": tail_to_json(self.tail),
        }

    # rewriting

    def map_forms(self, fn, table: VarTable, bounds=None, name=None) -> "Summand":
        factors = [f.map(fn) for f in self.factors]
        return Summand(table, factors, map_forms(self.tail, fn), self.name if name is None else name,
                       self.bounds if bounds is None else bounds)

    def substitute(self, mapping: Mapping[str, Union[str, MultiPoly]], new_class: str = "rec") -> "Summand":
        """Replace integer symbols by linear forms, possibly in new symbols.

        A substituted bound keeps its limiting behaviour through an internal
        deformation symbol, so evaluation still agrees with the limit of the
        original summand.
        """
        table = self.table
        texts = {k: v for k, v in mapping.items()}
        new_syms: List[str] = []
        for name, rhs in texts.items():
            if name not in table.integer_symbols or table.class_of(name) == "deform":
                raise FormError(f"cannot substitute unknown symbol {name!r}")
            if isinstance(rhs, str):
                for ident in re.findall(r"[A-Za-z_][A-Za-z_0-9]*", rhs):
                    if ident != "T" and ident not in table.integer_symbols and ident not in new_syms:
                        if ident in table.grounds or ident == "q":
                            raise FormError(f"{ident!r} is not an integer symbol")
                        new_syms.append(ident)
        eps = [f"eps_{b}" for b in self.bounds if b in texts]
        wide = PolyRing(table.integer_symbols + tuple(new_syms) + tuple(eps))
        images: Dict[str, MultiPoly] = {}
        for name, rhs in texts.items():
            img = parse_form(rhs, wide) if isinstance(rhs, str) else rhs.change_ring(wide)
            if img.total_degree() > 1:
                raise FormError(f"substitution for {name} must be linear")
            check_integral_linear(img, f"substitution for {name}")
            if name in self.bounds:
                img = img + wide.gen(f"eps_{name}")
            if any(wide.gens[i] in texts for i in img.variables()):
                raise FormError("substitutions must not refer to substituted symbols")
            images[name] = img
        entries = [(n, c) for n, c in table.entries if n not in texts]
        entries += [(n, new_class) for n in new_syms]
        entries += [(n, "deform") for n in eps]
        new_table = VarTable(tuple(entries))
        target = new_table.symbol_ring

        def fn(form: MultiPoly) -> MultiPoly:
            return form.change_ring(wide).subs(images).change_ring(target)

        bounds = [b for b in self.bounds if b not in texts]
        return self.map_forms(fn, new_table, bounds)

    def reclassify(self, rec: Optional[Sequence[str]] = None, sums: Optional[Sequence[str]] = None) -> "Summand":
        """Choose recurrence and summation variables; remaining integer symbols become parameters.

        The table is reordered as recurrence variables (given order), summation
        variables (given order), parameters, ground symbols, deformations.
        """
        table = self.table
        rec = list(table.rec if rec is None else rec)
        sums = list(table.sums if sums is None else sums)
        ints = [n for n in table.integer_symbols if table.class_of(n) != "deform"]
        for n in rec + sums:
            if n not in ints:
                raise FormError(f"unknown integer symbol {n!r}")
        if set(rec) & set(sums) or len(set(rec)) != len(rec) or len(set(sums)) != len(sums):
            raise FormError("recurrence and summation variables must be distinct")
        entries = [(n, "rec") for n in rec] + [(n, "sum") for n in sums]
        entries += [(n, "param") for n in ints if n not in rec and n not in sums]
        entries += [(n, "ground") for n in table.grounds]
        entries += [(n, "deform") for n in table.deform]
        new_table = VarTable(tuple(entries))
        target = new_table.symbol_ring
        return self.map_forms(lambda f: f.change_ring(target), new_table)

    def factorial_forms(self) -> List[MultiPoly]:
        """Arguments of the q-factorials the summand is built from, plus tail exponents."""
        out: List[MultiPoly] = []
        for f in self.factors:
            if isinstance(f, QBinom):
                out += [f.top, f.bottom, f.top - f.bottom]
            elif isinstance(f, QPoch):
                out += [f.arg, f.arg + f.length]
        if self.tail is not None:
            out += qpower_leaves(self.tail)
        return list(dict.fromkeys(out))

    # shift quotients

    def _exps(self, form: MultiPoly, scale: int = 1) -> List[int]:
        """Generator exponents of ``q^(scale*form)``; deformations are dropped."""
        gring = self.table.generator_ring
        vec = [0] * gring.n
        coeffs, const = linear_parts(form)
        vec[0] = _as_int(const * scale)
        for sym, c in coeffs.items():
            if self.table.class_of(sym) == "deform":
                continue
            vec[gring.index(gen_name(sym))] = _as_int(c * scale)
        return vec

    def _shift_map(self, shift: Sequence[int]) -> Dict[str, MultiPoly]:
        syms = self.table.shiftable
        if len(shift) != len(syms):
            raise ValueError(f"shift has length {len(shift)}, expected {len(syms)} for {syms}")
        ring = self.table.symbol_ring
        return {v: ring.gen(v) - s for v, s in zip(syms, shift) if s}

    def shift_quotient(self, shift: Sequence[int]) -> QProduct:
        """``F(v - shift) / F(v)`` in factored, reduced form."""
        key = tuple(shift)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        sub = self._shift_map(key)
        gring = self.table.generator_ring
        out = QProduct.one(gring)
        if sub:
            for f in self.factors:
                out = out * self._factor_quotient(f, sub)
            out = out * self._tail_quotient(sub)
            out = out.reduced()
        self._cache[key] = out
        return out

    def shift_ratfunc(self, shift: Sequence[int]) -> RatFunc:
        return self.shift_quotient(shift).to_ratfunc()

    def _delta(self, form: MultiPoly, sub) -> int:
        d = form - form.subs(sub)
        if not d.is_constant():
            raise FormError(f"{form} is not linear")
        return _as_int(d.constant_value())

    def _factor_quotient(self, f: Factor, sub) -> QProduct:
        gring = self.table.generator_ring
        if isinstance(f, QPow):
            diff = f.exponent.subs(sub) - f.exponent
            return QProduct.monomial(gring, self._exps(diff))
        if isinstance(f, QBinom):
            d = f.base
            n, m = f.top, f.bottom
            dn, dm = self._delta(n, sub), self._delta(m, sub)
            return (self._qfact_ratio(n, dn, d)
                    / (self._qfact_ratio(m, dm, d) * self._qfact_ratio(n - m, dn - dm, d)))
        if isinstance(f, QPoch):
            da = self._delta(f.arg, sub)
            dl = self._delta(f.length, sub)
            r = self._inf_ratio(f, f.arg, da) / self._inf_ratio(f, f.arg + f.length, da + dl)
            return r if f.power == 1 else r.inverse()
        de = self._delta(f.exponent, sub)
        if f.base == "-1":
            return QProduct(gring, -1 if de % 2 else 1)
        vec = [0] * gring.n
        vec[gring.index(f.base)] = -de
        return QProduct.monomial(gring, vec)

    def _qfact_ratio(self, x: MultiPoly, delta: int, d: int) -> QProduct:
        """``(q^d;q^d)_(x-delta) / (q^d;q^d)_x`` for generic x."""
        gring = self.table.generator_ring
        out = QProduct.one(gring)
        if delta > 0:
            for r in range(delta):
                out = out / QProduct.one_minus(gring, 1, self._exps(x - r, d))
        else:
            for r in range(1, -delta + 1):
                out = out * QProduct.one_minus(gring, 1, self._exps(x + r, d))
        return out

    def _inf_ratio(self, f: QPoch, x: MultiPoly, delta: int) -> QProduct:
        """``(c g q^(x-delta); q)_inf / (c g q^x; q)_inf`` for generic x."""
        gring = self.table.generator_ring
        out = QProduct.one(gring)

        def binom(e):
            vec = self._exps(x + e)
            if f.symbol is not None:
                vec[gring.index(f.symbol)] += 1
            return QProduct.one_minus(gring, f.coeff, vec)

        if delta > 0:
            for r in range(1, delta + 1):
                out = out * binom(-r)
        else:
            for r in range(-delta):
                out = out / binom(r)
        return out

    def _compile_tail(self, expr: Expr) -> Optional[QProduct]:
        gring = self.table.generator_ring

        def leaf_value(leaf: Leaf):
            if not leaf.coeff:
                return None
            vec = self._exps(leaf.qexp)
            if leaf.symbol is not None:
                vec[gring.index(leaf.symbol)] += 1
            return QProduct(gring, leaf.coeff, vec)

        return compile_tail(expr, leaf_value)

    def _tail_quotient(self, sub) -> QProduct:
        base = self._compile_tail(self.tail)
        if base is None:
            raise ZeroDivisionError("the tail is identically zero")
        shifted = self._compile_tail(map_forms(self.tail, lambda f: f.subs(sub)))
        if shifted is None:
            raise ZeroDivisionError("the shifted tail is identically zero")
        return shifted / base

    def shift_generators(self, p: QProduct, shift: Sequence[int]) -> QProduct:
        """Replace ``v`` by ``v - shift`` in a function of the generators (``X_v -> q^(-s_v) X_v``)."""
        gring = self.table.generator_ring
        idx = [gring.index(gen_name(v)) for v in self.table.shiftable]

        def fn(exps, c):
            exps = list(exps)
            for i, s in zip(idx, shift):
                exps[0] -= s * exps[i]
            return exps, c

        return p.substitute_monomials(fn)

    def cocycle_check(self, s: Sequence[int], t: Sequence[int]) -> bool:
        """``R_(s+t)(v) == R_t(v - s) * R_s(v)`` as reduced rational functions."""
        st = [a + b for a, b in zip(s, t)]
        lhs = self.shift_quotient(st)
        rhs = self.shift_generators(self.shift_quotient(t), s) * self.shift_quotient(s)
        q = (lhs / rhs).reduced()
        return q.is_unit() and q.const == 1

    def evaluate(self, assignment: Mapping[str, int]):
        from .evaluate import evaluate_summand

        return evaluate_summand(self, assignment)

    def __repr__(self):
        return f"Summand({self.name or '?'}, {len(self.factors)} factors, vars={self.table.entries})"


def _as_int(c) -> int:
    c = Fraction(c)
    if c.denominator != 1:
        raise FormError(f"non-integer exponent {c}")
    return c.numerator
