"""Plain-text rendering of recurrences with exponents written as linear forms."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping, Sequence, Tuple

from .algebra import MultiPoly

Laurent = Dict[Tuple[int, ...], Fraction]


def _num(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def linear_form(const: int, coeffs: Sequence[Tuple[str, int]]) -> str:
    """``-1 + 2x + y`` as ``-1+2*x+y``."""
    parts = []
    if const:
        parts.append(str(const))
    for name, c in coeffs:
        if not c:
            continue
        body = name if abs(c) == 1 else f"{abs(c)}*{name}"
        parts.append(("-" if c < 0 else "+") + body)
    if not parts:
        return "0"
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


def _gen_symbol(gen: str) -> str:
    return gen[2:] if gen.startswith("q_") else gen


def monomial_text(gens: Sequence[str], exps: Sequence[int]) -> str:
    """``q^(a + sum e_v v) * g^e`` for the generators ``q``, ``q_v`` and ground symbols ``g``."""
    qconst = 0
    qlin = []
    grounds = []
    for g, e in zip(gens, exps):
        if not e:
            continue
        if g == "q":
            qconst += e
        elif g.startswith("q_"):
            qlin.append((_gen_symbol(g), e))
        else:
            grounds.append(g if e == 1 else f"{g}^{{{e}}}")
    parts = []
    if qconst or qlin:
        body = linear_form(qconst, qlin)
        parts.append("q" if body == "1" else f"q^{{{body}}}")
    parts.extend(grounds)
    return " ".join(parts)


def laurent_from_poly(p: MultiPoly, shift: Sequence[int] = None) -> Laurent:
    shift = shift or (0,) * p.ring.n
    return {tuple(e + s for e, s in zip(exps, shift)): Fraction(c) for exps, c in p.sorted_terms()}


def laurent_text(gens: Sequence[str], terms: Mapping[Tuple[int, ...], Fraction]) -> Tuple[bool, str]:
    """A Laurent polynomial as ``(negative, text)``, monomial content pulled out: ``q^{x}(1-q^{y})``.

    ``negative`` is set only for a single negative term, whose text is then its absolute value.
    """
    if not terms:
        return False, "0"
    n = len(gens)
    low = tuple(min(e[i] for e in terms) for i in range(n))
    rest = {tuple(a - b for a, b in zip(e, low)): c for e, c in terms.items()}
    head = monomial_text(gens, low)
    if len(rest) == 1:
        (e, c), = rest.items()
        if not head:
            return c < 0, _num(abs(c))
        return c < 0, head if abs(c) == 1 else f"{_num(abs(c))} {head}"
    pieces = []
    for e in sorted(rest, key=lambda x: (sum(x), x)):
        c = rest[e]
        mono = monomial_text(gens, e)
        if not mono:
            body = _num(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{_num(abs(c))} {mono}"
        pieces.append(("-" if c < 0 else "+", body))
    text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return False, f"{head}({text})" if head else f"({text})"


def shifted_args(names: Sequence[str], shift: Sequence[int], forward: bool = False) -> str:
    out = []
    for v, s in zip(names, shift):
        d = s if forward else -s
        out.append(v if d == 0 else f"{d}+{v}")
    return ",".join(out)


def relation_text(head: str, names: Sequence[str], gens: Sequence[str],
                  terms: Mapping[Tuple[int, ...], Mapping[Tuple[int, ...], Fraction]],
                  forward: bool = False, pivot: bool = True) -> str:
    """``c_1 HEAD(args) + c_2 HEAD(args) + ... = 0`` with arguments in ascending order.

    ``terms`` maps shift tuples to Laurent coefficients.  When the zero shift
    has a monomial coefficient and ``pivot`` is set, every coefficient is
    divided by minus that monomial, so the zero-shift term reads ``- HEAD(v)``.
    """
    terms = {s: dict(c) for s, c in terms.items() if c}
    zero = tuple(0 for _ in names)
    if pivot and zero in terms and len(terms[zero]) == 1:
        (e0, c0), = terms[zero].items()
        terms = {s: {tuple(a - b for a, b in zip(e, e0)): -c / c0 for e, c in cs.items()}
                 for s, cs in terms.items()}
    order = sorted(terms, reverse=not forward)
    parts = []
    for s in order:
        negative, coeff = laurent_text(gens, terms[s])
        call = f"{head}({shifted_args(names, s, forward)})"
        parts.append(("-" if negative else "+", call if coeff == "1" else f"{coeff} {call}"))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text + " = 0"
