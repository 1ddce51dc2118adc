"""Acceptance criteria, one test each.  Every test records a PASS/FAIL line that is
printed in the terminal summary (and immediately, with ``-s``)."""

import itertools
import random
import time
from contextlib import contextmanager

import pytest

from qceline import pipeline
from qceline.algebra import PolyMatrix, PolyRing, nullspace
from qceline.celine import checkKFree, findRecurrences, normalize_coeffs
from qceline.oracle import qBin, stabilizationCheck, verifyGrid
from qceline.structset import load_structure_set
from qceline.sumrec import SumRecurrence, backwardShifts, checkTermwise, from_forward, recheck_certificate, sumOver
from math import comb

from conftest import ACCEPTANCE, DATA, load

FULL_GRID = {"i": (0, 3), "j": (0, 3), "k": (0, 3), "L1": (-2, 7), "L2": (-2, 7), "M": (-2, 7)}


@contextmanager
def criterion(number, text):
    ok = False
    try:
        yield
        ok = True
    finally:
        ACCEPTANCE.append((number, ok, text))
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {text}")


def _gsum_sum():
    f, (rec,) = pipeline.derive_gsum_kfree(DATA)
    return f, rec, backwardShifts(sumOver(rec))


def test_criterion_01_four_term_kfree_recurrence():
    with criterion(1, "gsum k-free recurrence on the four-shift structure set, exact, under 5 min"):
        t0 = time.perf_counter()
        recs = findRecurrences(load("gsum.json"), load_structure_set(DATA / "structset_in5.json"))
        elapsed = time.perf_counter() - t0
        assert len(recs) == 1
        ring = recs[0].ring
        want = normalize_coeffs({s: ring.parse(t) for s, t in pipeline.GSUM_KFREE.items()})
        assert recs[0].coeffs == want
        assert elapsed <= 300


def test_criterion_02_summed_recurrence_rendering():
    with criterion(2, "summed gsum recurrence matches the golden rendering byte for byte"):
        _, _, s = _gsum_sum()
        assert s.render() == pipeline.GSUM_SUM_TEXT
        ref = SumRecurrence(s.rec_vars, s.ring, {k: s.ring.parse(v) for k, v in pipeline.GSUM_SUM.items()})
        assert s.coeffs == ref.normalized().coeffs


@pytest.mark.xfail(strict=True, reason="no termwise witness exists for psum within window 2; "
                                       "the bounded sums do satisfy the recurrence on a grid")
def test_criterion_03_psum_termwise_certificate():
    with criterion(3, "psum passes the termwise check against the summed recurrence, window <= 2"):
        _, _, s = _gsum_sum()
        cert = checkTermwise(load("psum.json"), s, 2)
        assert cert.holds, f"no witness among {cert.candidates_tried} candidate shift assignments"


def test_criterion_03_grid_substitute():
    """Not the criterion itself: the numeric fact the pipeline falls back on."""
    _, _, s = _gsum_sum()
    assert pipeline.psum_grid_report(s)["status"] == "pass"


def test_criterion_04_boundary_recurrence(boundary_result):
    with criterion(4, "boundary L2 = i+j-1: completed rectangle gives the three-term sum, psum certified"):
        f, recs, (kfree, s) = boundary_result
        assert checkKFree(f, kfree)
        assert s.render() == pipeline.BOUNDARY_SUM_TEXT
        ref = SumRecurrence(s.rec_vars, s.ring, {k: s.ring.parse(v) for k, v in pipeline.BOUNDARY_SUM.items()})
        assert s.coeffs == ref.normalized().coeffs
        psum_b = pipeline.psum_boundary(DATA)
        cert = checkTermwise(psum_b, s, 2)
        assert cert.holds and recheck_certificate(psum_b, s, cert)


def test_criterion_05_eight_term_recurrence():
    with criterion(5, "double boundary: eight-term recurrence, exact coefficients, under 10 min"):
        t0 = time.perf_counter()
        f, recs = pipeline.derive_delta(DATA)
        kfree, s = pipeline.first_summable(recs)
        elapsed = time.perf_counter() - t0
        assert checkKFree(f, kfree)
        ref = SumRecurrence(s.rec_vars, s.ring, {k: s.ring.parse(v) for k, v in pipeline.DELTA_SUM.items()})
        assert s.coeffs == ref.normalized().coeffs and len(s.coeffs) == 8
        factor = s.ring.parse("q - q_i*q_j")
        assert sum(1 for c in s.coeffs.values() if factor.divides(c)) == 2
        assert elapsed <= 600


def test_criterion_06_delta_solution(delta_result):
    with criterion(6, "delta closed form satisfies the eight-term recurrence; Delta = 0 base case"):
        _, _, (_, s) = delta_result
        reports = pipeline.delta_solution_reports(s)
        assert [r["status"] for r in reports.values()] == ["pass", "pass"]
        assert reports["i=j=0"]["points"] == 9 * 6
        base = verifyGrid("g_delta_zero", {"i": (0, 3), "j": (0, 3), "k": (0, 3)})
        assert base["status"] == "pass" and base["points"] == 64


def _single(result, reference, identity, left, ground):
    _, recs, (kfree, s) = result
    ref = from_forward(s.rec_vars, s.ring, {j: s.ring.parse(t) for j, t in reference.items()})
    assert s.coeffs == ref.coeffs
    reports = pipeline.single_base_reports(identity, s, left, ground)
    assert reports["sides"]["grid"] == {"L": [0, 8]}
    assert reports["left_side_recurrence"]["points"] == 13
    assert all(r["status"] == "pass" for r in reports.values())


def test_criterion_07_jacobi(jacobi_result):
    from qceline.oracle.identities import jacobi_left
    with criterion(7, "finite Jacobi: order-4 recurrence exact, sides agree L <= 8, left side obeys it L <= 12"):
        _single(jacobi_result, pipeline.JACOBI_FORWARD, "jacobi", jacobi_left, "alpha")


def test_criterion_08_euler(euler_result):
    from qceline.oracle.identities import euler_left
    with criterion(8, "finite Euler: order-4 recurrence exact, sides agree L <= 8, left side obeys it L <= 12"):
        _single(euler_result, pipeline.EULER_FORWARD, "euler", euler_left, None)


def test_criterion_09_main_identity_grid():
    with criterion(9, "g = p on the full grid, plus both collapses on their sub-grids, under 10 min"):
        t0 = time.perf_counter()
        report = verifyGrid("g_eq_p", FULL_GRID)
        elapsed = time.perf_counter() - t0
        assert report["status"] == "pass" and report["points"] >= 10240
        assert elapsed <= 600
        sub = {k: FULL_GRID[k] for k in ("i", "j", "k", "M")}
        assert verifyGrid("p_double", {**sub, "L": FULL_GRID["L1"]})["status"] == "pass"
        assert verifyGrid("double_single", {k: FULL_GRID[k] for k in ("i", "j", "k")}
                          | {"L": FULL_GRID["L1"]})["status"] == "pass"


def test_criterion_10_recursion_and_boundary_grid():
    with criterion(10, "L1 recursion and L1 = i-1 boundary form on the full grid"):
        assert verifyGrid("g_l1_recursion", FULL_GRID)["status"] == "pass"
        sub = {k: FULL_GRID[k] for k in ("i", "j", "k", "L2", "M")}
        assert verifyGrid("g_l1_boundary", sub)["status"] == "pass"


def test_criterion_11_stabilization():
    with criterion(11, "low coefficients stabilize to the infinite product, i,j,k <= 2, order 25"):
        assert all(stabilizationCheck(i, j, k, 25) for i, j, k in itertools.product(range(3), repeat=3))


def test_criterion_12_property_suites():
    with criterion(12, "cocycle x1000, nullspace soundness x200, q-binomial laws n <= 12"):
        rnd = random.Random(20260101)
        fixtures = [load(n) for n in ("gsum.json", "psum.json", "jacobi_rhs.json", "euler_rhs.json")]
        for _ in range(1000):
            f = rnd.choice(fixtures)
            n = len(f.table.shiftable)
            s = tuple(rnd.randint(-2, 2) for _ in range(n))
            t = tuple(rnd.randint(-2, 2) for _ in range(n))
            assert f.cocycle_check(s, t), (f.name, s, t)

        ring = PolyRing(["q", "x"])
        for _ in range(200):
            rows, cols = rnd.randint(1, 4), rnd.randint(1, 5)
            entry = lambda: ring.from_terms([((rnd.randint(0, 2), rnd.randint(0, 2)), rnd.randint(-3, 3))
                                             for _ in range(rnd.randint(0, 2))])
            data = [[entry() for _ in range(cols)] for _ in range(rows)]
            if rows > 1 and rnd.random() < 0.5:
                data[-1] = [a + b for a, b in zip(data[0], data[1])]
            m = PolyMatrix(ring, data)
            for v in nullspace(m):
                assert all(x.is_zero() for x in m.apply(v))

        for n in range(13):
            for b in range(n + 1):
                assert qBin(n, b) == qBin(n, n - b)
                if n:
                    assert qBin(n, b) == qBin(n - 1, b) + qBin(n - 1, b - 1).shift(n - b)
                assert qBin(n, b).at_one() == comb(n, b)
