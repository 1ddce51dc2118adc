import itertools
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qceline.oracle import (BiLaurent, QPoly, T, eulerSides, gPoly, grid_points, jacobiSides, pPoly, parse_grid,
                            qBin, qMultinomial, rhsSingle, stabilizationCheck, verifyGrid)
from qceline.oracle.identities import euler_left, jacobi_left

from conftest import to_bilaurent, to_qpoly


def Q(*coeffs):
    return QPoly.from_dict(dict(enumerate(coeffs)))


def test_qbin_examples():
    assert qBin(4, 2) == Q(1, 1, 2, 1, 1)
    assert all(qBin(n, 0, d) == QPoly.one() for n in range(6) for d in (1, 2, 3))
    assert qBin(3, -1).is_zero()
    assert qBin(-1, 0) == QPoly.one()
    assert qBin(-1, 1) == QPoly.from_dict({-1: -1})
    assert qBin(1, 2).is_zero()


def test_qbin_base():
    assert qBin(2, 1, 2) == Q(1, 0, 1)


def test_qmultinomial_examples():
    assert qMultinomial(2, [1, 1]) == Q(1, 1)
    assert qMultinomial(3, [2, -1]).is_zero()


def test_triangular_numbers():
    assert [T(m) for m in (-2, -1, 0, 1, 2, 3)] == [1, 0, 0, 1, 3, 6]


def test_g_and_p_examples():
    for L1, L2, M in [(0, 0, 0), (2, 3, 4), (5, 1, 2)]:
        assert gPoly(0, 0, 0, L1, L2, M) == QPoly.one()
        assert pPoly(0, 0, 0, L1, L2, M) == QPoly.one()
    assert gPoly(1, 0, 0, 2, 5, 5) == Q(0, 1, 1)
    assert pPoly(1, 0, 0, 2, 5, 5) == Q(0, 1, 1)
    for bad in [(-1, 0, 0), (0, -1, 2), (1, 1, -1)]:
        assert gPoly(*bad, 3, 3, 3).is_zero()


def test_p_on_double_boundary():
    for i, j, k, M in itertools.product(range(3), range(3), range(3), range(-1, 6)):
        want = qBin(M - i - j, k).shift(T(k)) if i == j == 0 else QPoly.zero()
        assert pPoly(i, j, k, i + j - 1, i + j - 1, M) == want


def test_rhs_examples():
    assert all(rhsSingle(0, 0, 0, L) == QPoly.one() for L in range(5))
    assert rhsSingle(1, 1, 0, 2) == Q(0, 0, 1, 1)


def test_jacobi_euler_small():
    for L in (0,):
        left, right = jacobiSides(L)
        assert left == right == BiLaurent({(0, 0): 1})
        el, er = eulerSides(L)
        assert el == er == QPoly.one()
    left, _ = jacobiSides(1)
    assert left == BiLaurent({(0, 0): 1, (1, -1): 1, (1, 0): -1, (1, 1): 1})


@pytest.mark.parametrize("L", range(0, 7))
def test_jacobi_euler_sides_agree(L):
    a, b = jacobiSides(L)
    assert a == b == jacobi_left(L)
    c, d = eulerSides(L)
    assert c == d == euler_left(L)


def test_stabilization_examples():
    assert stabilizationCheck(0, 0, 0, 5)
    assert stabilizationCheck(1, 0, 0, 10)
    L = 14
    assert gPoly(1, 0, 0, L, L, L).truncate(10) == {e: 1 for e in range(1, 11)}
    with pytest.raises(ValueError):
        stabilizationCheck(0, 0, 0, -1)


# properties of the q-binomials

@pytest.mark.parametrize("n", range(13))
def test_qbin_pascal_symmetry_specialization(n):
    for b in range(n + 1):
        assert qBin(n, b) == qBin(n, n - b)
        if n > 0:
            assert qBin(n, b) == qBin(n - 1, b) + qBin(n - 1, b - 1).shift(n - b)
        for d in (1, 2, 3):
            assert qBin(n, b, d).at_one() == comb(n, b)
            assert qBin(n, b, d) == qBin(n, n - b, d)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 8), st.lists(st.integers(0, 3), min_size=1, max_size=3))
def test_qmultinomial_at_one(extra, parts):
    L = sum(parts) + extra
    from math import factorial
    want = factorial(L)
    for p in parts:
        want //= factorial(p)
    want //= factorial(L - sum(parts))
    assert qMultinomial(L, parts).at_one() == want


# dual implementations: brute-force polynomials against summing the symbolic summand

def _sum_summand(f, fixed, sum_ranges):
    total = QPoly.zero()
    names = list(sum_ranges)
    for vals in itertools.product(*(range(lo, hi + 1) for lo, hi in sum_ranges.values())):
        total = total + to_qpoly(f.evaluate({**fixed, **dict(zip(names, vals))}))
    return total


@pytest.mark.parametrize("i,j,k", [(0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1), (2, 1, 0), (2, 1, 1), (0, 2, 2)])
def test_gpoly_matches_summand(gsum, i, j, k):
    top = max(i, j, k) + 1
    for L1, L2, M in [(0, 0, 0), (2, 3, 2), (3, 1, 4), (4, 4, 4), (-1, 2, 3)]:
        fixed = dict(i=i, j=j, k=k, L1=L1, L2=L2, M=M)
        got = _sum_summand(gsum, fixed, {"ab": (-1, top), "ac": (-1, top), "bc": (-1, top)})
        assert got == gPoly(i, j, k, L1, L2, M), fixed


@pytest.mark.parametrize("i,j,k", [(0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1), (2, 1, 0), (2, 2, 1)])
def test_ppoly_matches_summand(psum, i, j, k):
    for L1, L2, M in [(0, 0, 0), (2, 3, 2), (3, 1, 4), (4, 4, 4), (-1, 2, 3)]:
        fixed = dict(i=i, j=j, k=k, L1=L1, L2=L2, M=M)
        got = _sum_summand(psum, fixed, {"s": (-1, max(i, j, k) + 1)})
        assert got == pPoly(i, j, k, L1, L2, M), fixed


def test_jacobi_rhs_matches_summand():
    from conftest import load
    f = load("jacobi_rhs.json")
    for L in range(4):
        total = BiLaurent()
        for i, j, k in itertools.product(range(L + 1), repeat=3):
            total = total + to_bilaurent(f.evaluate(dict(L=L, i=i, j=j, k=k)))
        assert total == jacobiSides(L)[1]


def test_euler_rhs_matches_summand():
    from conftest import load
    f = load("euler_rhs.json")
    for L in range(4):
        total = _sum_summand(f, {"L": L}, {"i": (0, L), "j": (0, L), "k": (0, L)})
        assert total == eulerSides(L)[1]


# grid plumbing

def test_parse_grid():
    assert parse_grid("i=0..3,L1=-2..7") == {"i": (0, 3), "L1": (-2, 7)}
    assert parse_grid("k=2") == {"k": (2, 2)}
    assert parse_grid(None) == {}
    for bad in ["i=3..1", "i", "i=a..b", "1x=0..2"]:
        with pytest.raises(ValueError):
            parse_grid(bad)


def test_grid_points_order():
    pts = grid_points({"a": (0, 1), "b": (5, 6)})
    assert pts == [{"a": 0, "b": 5}, {"a": 0, "b": 6}, {"a": 1, "b": 5}, {"a": 1, "b": 6}]


def test_verify_grid_small_and_errors():
    r = verifyGrid("double_single", {"L": (-2, 4)})
    assert r["status"] == "pass" and r["points"] == 4 * 4 * 4 * 7
    with pytest.raises(KeyError):
        verifyGrid("nope")
    with pytest.raises(KeyError):
        verifyGrid("euler", {"M": (0, 1)})


def test_verify_grid_reports_counterexample(monkeypatch):
    from qceline.oracle import grid
    ident = grid.IDENTITIES["euler"]
    broken = grid.Identity(ident.params, ident.defaults, ident.lhs, lambda L: ident.rhs(L) + (QPoly.one() if L == 2 else QPoly.zero()))
    monkeypatch.setitem(grid.IDENTITIES, "euler", broken)
    r = verifyGrid("euler")
    assert r["status"] == "fail" and r["counterexample"]["point"] == {"L": 2} and r["points"] == 3


def test_p_double_and_double_single_small():
    assert verifyGrid("p_double", {"i": (0, 2), "j": (0, 2), "k": (0, 2), "L": (-1, 5), "M": (-1, 5)})["status"] == "pass"
    assert verifyGrid("g_single", {"L": (-1, 5)})["status"] == "pass"
