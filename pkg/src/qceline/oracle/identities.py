"""Brute-force evaluation of the bounded sums and both sides of each identity."""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence, Tuple

from .qpoly import BiLaurent, QPoly


def T(m: int) -> int:
    """Triangular number ``m(m+1)/2``, taken literally for negative ``m``."""
    return m * (m + 1) // 2


def _one_minus(e: int) -> QPoly:
    return QPoly.one() - QPoly.monomial(e)


@lru_cache(maxsize=None)
def qfactorial(n: int, d: int = 1) -> QPoly:
    """``(q^d; q^d)_n`` for ``n >= 0``."""
    out = QPoly.one()
    for r in range(1, n + 1):
        out = out * _one_minus(d * r)
    return out


@lru_cache(maxsize=None)
def qBin(top: int, bottom: int, d: int = 1) -> QPoly:
    """Gaussian binomial in base ``q^d``: ``(q^(d(top-bottom+1)); q^d)_bottom / (q^d; q^d)_bottom``.

    Zero when ``bottom < 0``.  For ``0 <= top < bottom`` the numerator contains
    the factor ``1 - q^0``; for ``top < 0`` the value is a Laurent polynomial.
    """
    if bottom < 0:
        return QPoly.zero()
    num = QPoly.one()
    for r in range(1, bottom + 1):
        e = d * (top - bottom + r)
        if e == 0:
            return QPoly.zero()
        num = num * _one_minus(e)
    return num.exact_div(qfactorial(bottom, d))


def qMultinomial(L: int, parts: Sequence[int], d: int = 1) -> QPoly:
    out = QPoly.one()
    rest = L
    for p in parts:
        out = out * qBin(rest, p, d)
        if out.is_zero():
            return out
        rest -= p
    return out


def _terms_g(i: int, j: int, k: int):
    """Color counts ``(a, b, c, ab, ac, bc)`` satisfying the i,j,k-constraints."""
    if min(i, j, k) < 0:
        return
    for ab in range(0, min(i, j) + 1):
        for ac in range(0, min(i - ab, k) + 1):
            for bc in range(0, min(j - ab, k - ac) + 1):
                yield i - ab - ac, j - ab - bc, k - ac - bc, ab, ac, bc


@lru_cache(maxsize=None)
def gPoly(i: int, j: int, k: int, L1: int, L2: int, M: int) -> QPoly:
    total = QPoly.zero()
    for a, b, c, ab, ac, bc in _terms_g(i, j, k):
        t = a + b + c + ab + ac + bc
        common = qBin(L2 - t + b, b) * qBin(L2 - t, ab) * qBin(M - t + c, c) * qBin(M - t, ac)
        if common.is_zero():
            continue
        first = qBin(L1 - t + a, a) * qBin(M - t, bc)
        second = qBin(L1 - t + a - 1, a - 1) * qBin(M - t, bc - 1)
        bracket = first.shift(bc) + second
        total = total + (common * bracket).shift(T(t) + T(ab) + T(ac) + T(bc - 1))
    return total


@lru_cache(maxsize=None)
def pPoly(i: int, j: int, k: int, L1: int, L2: int, M: int) -> QPoly:
    total = QPoly.zero()
    if min(i, j, k) < 0:
        return total
    for s in range(0, min(i, j, k) + 1):
        term = qBin(L1 - s, i - s) * qBin(L2 - i, j - s) * qBin(L2 - i - j + s, s) * qBin(M - i - j, k - s)
        total = total + term.shift(s * (M + 2) - T(s) + T(i - s) + T(j - s) + T(k - s))
    return total


def rhsDouble(i: int, j: int, k: int, L: int, M: int) -> QPoly:
    total = QPoly.zero()
    if min(i, j, k) < 0:
        return total
    for s in range(0, min(i, j, k) + 1):
        term = qMultinomial(L - s, [s, i - s, j - s]) * qBin(M - i - j, k - s)
        total = total + term.shift(s * (M + 2) - T(s) + T(i - s) + T(j - s) + T(k - s))
    return total


def rhsSingle(i: int, j: int, k: int, L: int) -> QPoly:
    if min(i, j, k) < 0:
        return QPoly.zero()
    return (qBin(L - k, i) * qBin(L - i, j) * qBin(L - j, k)).shift(T(i) + T(j) + T(k))


def delta_solution(i: int, j: int, k: int, delta: int) -> QPoly:
    """``delta_(i,0) delta_(j,0) q^(T_k) [delta, k]``."""
    if i or j or k < 0:
        return QPoly.zero()
    return qBin(delta, k).shift(T(k))


def l1_boundary_rhs(i: int, j: int, k: int, L2: int, M: int) -> QPoly:
    if min(i, j, k) < 0:
        return QPoly.zero()
    return (qBin(L2 - i, j - i) * qBin(L2 - j, i) * qBin(M - i - j, k - i)).shift(
        i * (M + 2) - T(i) + T(j - i) + T(k - i))


def jacobi_left(L: int) -> BiLaurent:
    left = BiLaurent()
    for l in range(L + 1):
        # (1 + a^(2l+1)) / (1 + a) = sum_{m=0}^{2l} (-a)^m
        left = left + BiLaurent({(T(l), m - l): (-1) ** m for m in range(2 * l + 1)})
    return left


def jacobiSides(L: int) -> Tuple[BiLaurent, BiLaurent]:
    """Both sides of the finite Jacobi identity, as polynomials in q and a^(+-1)."""
    left = jacobi_left(L)
    right = BiLaurent()
    for i in range(L + 1):
        for j in range(L + 1):
            for k in range(L + 1):
                p = qBin(L - k, i) * qBin(L - i, j) * qBin(L - j, k)
                if p.is_zero():
                    continue
                right = right + BiLaurent.from_qpoly(p.shift(T(i) + T(j) + T(k)) * (-1) ** k, i - j)
    return left, right


def euler_left(L: int) -> QPoly:
    left = QPoly.zero()
    for l in range(L + 1):
        left = left + QPoly.monomial(2 * (T(L) - T(l)))
    return left


def eulerSides(L: int) -> Tuple[QPoly, QPoly]:
    left = euler_left(L)
    right = QPoly.zero()
    for i in range(L + 1):
        for j in range(L + 1):
            for k in range(L + 1):
                p = qBin(L - k, i, 2) * qBin(L - i, j, 2) * qBin(L - j, k, 2)
                if p.is_zero():
                    continue
                right = right + p.shift(2 * T(i) + 2 * T(j) + 2 * T(k) - i - j) * (-1) ** j
    return left, right


def inverse_qfactorial_series(m: int, N: int) -> QPoly:
    """``1/(q;q)_m`` truncated after ``q^N``, by iterated geometric series."""
    out = {0: 1}
    for r in range(1, m + 1):
        nxt = {}
        for e, c in out.items():
            for x in range(e, N + 1, r):
                nxt[x] = nxt.get(x, 0) + c
        out = nxt
    return QPoly.from_dict(out)


def stabilizationCheck(i: int, j: int, k: int, N: int) -> bool:
    """Low coefficients of ``g(L, L, L)`` stabilize to those of ``q^(T_i+T_j+T_k)/((q)_i (q)_j (q)_k)``."""
    if N < 0:
        raise ValueError("order must be non-negative")
    L = N + i + j + k + 2
    first = gPoly(i, j, k, L, L, L).truncate(N)
    second = gPoly(i, j, k, L + 1, L + 1, L + 1).truncate(N)
    series = (inverse_qfactorial_series(i, N) * inverse_qfactorial_series(j, N)
              * inverse_qfactorial_series(k, N)).shift(T(i) + T(j) + T(k))
    return first == second == series.truncate(N)
