"""Multivariate gcd by recursive primitive polynomial remainder sequences."""

from __future__ import annotations

from functools import reduce
from typing import Dict, Iterable, List

from .polynomial import MultiPoly


def poly_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Greatest common divisor, integer-primitive with positive leading coefficient.

    ``poly_gcd(p, 0)`` is the normalized ``p``; ``poly_gcd(0, 0)`` is ``0``.
    """
    if p.is_zero():
        return q.primitive()
    if q.is_zero():
        return p.primitive()
    ring = p.ring
    mp, mq = p.min_monomial(), q.min_monomial()
    g_mono = ring.mono_gcd(mp, mq)
    if mp:
        p = p.div_monomial(mp)
    if mq:
        q = q.div_monomial(mq)
    core = _gcd_core(p.primitive(), q.primitive())
    return core.mul_monomial(g_mono) if g_mono else core


def poly_gcd_many(polys: Iterable[MultiPoly]) -> MultiPoly:
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        raise ValueError("gcd of no nonzero polynomials")
    # small ones first: the running gcd shrinks fastest that way
    polys.sort(key=len)
    g = polys[0].primitive()
    for p in polys[1:]:
        if g.is_constant():
            break
        g = poly_gcd(g, p)
    return g


def poly_lcm(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    if p.is_zero() or q.is_zero():
        return p.ring.zero()
    g = poly_gcd(p, q)
    return (p.primitive() * q.primitive().exquo(g)).primitive()


def _gcd_core(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """gcd of primitive polynomials free of monomial content."""
    ring = p.ring
    if p.is_constant() or q.is_constant():
        return ring.one()
    if p == q:
        return p
    vp, vq = set(p.variables()), set(q.variables())
    only_p = vp - vq
    if only_p:
        return poly_gcd(_content_in(p, max(only_p)), q)
    only_q = vq - vp
    if only_q:
        return poly_gcd(p, _content_in(q, max(only_q)))
    x = max(vp)
    up, uq = p.to_univariate(x), q.to_univariate(x)
    cp = poly_gcd_many(up.values())
    cq = poly_gcd_many(uq.values())
    c = poly_gcd(cp, cq)
    if not cp.is_constant():
        up = {e: v.exquo(cp) for e, v in up.items()}
    if not cq.is_constant():
        uq = {e: v.exquo(cq) for e, v in uq.items()}
    a, b = (up, uq) if _deg(up) >= _deg(uq) else (uq, up)
    while True:
        r = _prem(a, b)
        if not r:
            break
        if _deg(r) == 0:
            b = {0: ring.one()}
            break
        cr = poly_gcd_many(r.values())
        if not cr.is_constant():
            r = {e: v.exquo(cr) for e, v in r.items()}
        r = _strip_integer_content(ring, x, r)
        a, b = b, r
    # b is primitive in x here, so c * b is the gcd up to a unit
    return (c * MultiPoly.from_univariate(ring, x, b)).primitive()


def _strip_integer_content(ring, x: int, u: Dict[int, MultiPoly]) -> Dict[int, MultiPoly]:
    # poly_gcd_many ignores integer content, which otherwise grows without bound
    c = MultiPoly.from_univariate(ring, x, u).content()
    return u if c == 1 else {e: v.scale(1 / c) for e, v in u.items()}


def _content_in(p: MultiPoly, x: int) -> MultiPoly:
    return poly_gcd_many(p.to_univariate(x).values())


def _deg(u: Dict[int, MultiPoly]) -> int:
    return max(u) if u else -1


def _prem(a: Dict[int, MultiPoly], b: Dict[int, MultiPoly]) -> Dict[int, MultiPoly]:
    """Pseudo-remainder ``lc(b)**(deg a - deg b + 1) * a mod b`` in the main variable."""
    db = _deg(b)
    lcb = b[db]
    r = dict(a)
    e = _deg(a) - db + 1
    while r and _deg(r) >= db:
        dr = _deg(r)
        lcr = r[dr]
        shift = dr - db
        new: Dict[int, MultiPoly] = {}
        for d, v in r.items():
            new[d] = v * lcb
        for d, v in b.items():
            k = d + shift
            new[k] = new.get(k, lcr.ring.zero()) - lcr * v
        r = {d: v for d, v in new.items() if not v.is_zero()}
        e -= 1
    if e > 0 and r:
        f = lcb ** e
        r = {d: v * f for d, v in r.items()}
    return r


def content_and_primitive(vec: List[MultiPoly]):
    """Split a vector into its polynomial content and primitive part."""
    g = poly_gcd_many(vec)
    return g, [v.exquo(g) if not v.is_zero() else v for v in vec]


def lcm_many(polys: Iterable[MultiPoly]) -> MultiPoly:
    return reduce(poly_lcm, polys)
