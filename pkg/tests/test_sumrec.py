import json
from functools import lru_cache

import pytest

from qceline import pipeline
from qceline.algebra import PolyRing
from qceline.celine import KFreeRecurrence
from qceline.oracle import check_recurrence, gPoly, grid_points
from qceline.oracle.identities import euler_left, jacobi_left
from qceline.qterm import Summand
from qceline.sumrec import (CollapseError, SumRecurrence, SumRecurrenceError, TermwiseCertificate, backwardShifts,
                            checkTermwise, forward_shifts, from_forward, recheck_certificate, sumOver)

R1 = PolyRing(["q", "q_n"])


def one_var(terms):
    return SumRecurrence(("n",), R1, {s: R1.parse(t) for s, t in terms.items()})


def constant_summand():
    return Summand.from_json({"variables": [{"name": "n", "class": "rec"}, {"name": "k", "class": "sum"}],
                              "factors": []})


def test_collapse():
    rec = KFreeRecurrence(("n",), ("k",), R1, ((0, 0), (0, 1)), {(0, 0): R1.one(), (0, 1): -R1.one()})
    with pytest.raises(CollapseError, match="recurrence collapsed to 0"):
        sumOver(rec)
    with pytest.raises(CollapseError):
        SumRecurrence(("n",), R1, {(0,): R1.zero()})


def test_backward_shifts_examples():
    fwd = one_var({(-1,): "q_n", (0,): "-1"})
    back = backwardShifts(fwd)
    assert back.shifts == ((0,), (1,))
    # q^n SUM(n+1) - SUM(n) = 0 becomes q^(n-1) SUM(n) - SUM(n-1) = 0, then cleared of q^-1
    assert back.coefficient((0,)) == R1.parse("q_n")
    assert back.coefficient((1,)) == R1.parse("-q")
    already = one_var({(0,): "1", (2,): "-q_n"})
    assert backwardShifts(already).coeffs == already.normalized().coeffs


def test_out5_sums_to_printed_form(gsum_result):
    raw = sumOver(gsum_result[1][0])
    s = backwardShifts(raw)
    ref = SumRecurrence(s.rec_vars, s.ring, {k: s.ring.parse(v) for k, v in pipeline.GSUM_SUM.items()}).normalized()
    assert s.coeffs == ref.coeffs
    assert s.render() == pipeline.GSUM_SUM_TEXT


def test_out10_sum(delta_result):
    _, _, (_, s) = delta_result
    ref = SumRecurrence(s.rec_vars, s.ring, {k: s.ring.parse(v) for k, v in pipeline.DELTA_SUM.items()}).normalized()
    assert s.coeffs == ref.coeffs
    assert len(s.coeffs) == 8
    factor = s.ring.parse("q - q_i*q_j")
    assert sum(1 for c in s.coeffs.values() if factor.divides(c)) == 2


def test_boundary_sum(boundary_result):
    _, _, (_, s) = boundary_result
    assert s.render() == pipeline.BOUNDARY_SUM_TEXT


def test_json_roundtrip(gsum_result):
    s = backwardShifts(sumOver(gsum_result[1][0]))
    again = SumRecurrence.from_json(json.loads(json.dumps(s.to_json())))
    assert again.coeffs == s.coeffs and again.rec_vars == s.rec_vars
    with pytest.raises(ValueError):
        SumRecurrence.from_json({"kind": "kfree_recurrence"})


def test_forward_roundtrip(jacobi_result, euler_result):
    for _, _, (_, s) in (jacobi_result, euler_result):
        fwd = forward_shifts(s)
        assert sorted(fwd) == [(0,), (1,), (2,), (3,), (4,)]
        assert from_forward(s.rec_vars, s.ring, fwd).coeffs == s.coeffs


def test_forward_and_backward_forms_agree_numerically(jacobi_result, euler_result):
    for (_, _, (_, s)), left, ground in ((jacobi_result, jacobi_left, "alpha"), (euler_result, euler_left, None)):
        pts = grid_points({"L": (4, 12)})
        back = check_recurrence(pipeline.recurrence_terms(s), s.rec_vars, left, pts, ground=ground)
        pts = grid_points({"L": (0, 8)})
        fwd = check_recurrence(pipeline.recurrence_terms(s, forward=True), s.rec_vars, left, pts, ground=ground)
        assert back["status"] == fwd["status"] == "pass"


def test_forward_rendering(euler_result):
    _, _, (_, s) = euler_result
    text = s.render(forward=True)
    assert text.endswith("= 0") and "SUM(4+L)" in text and "SUM(-" not in text


# termwise certificates

def test_termwise_trivial():
    f = constant_summand()
    rec = one_var({(0,): "1", (1,): "-1"})
    cert = checkTermwise(f, rec, 0)
    assert cert.holds and cert.candidates_tried == 1
    assert cert.shifts == {(0,): (0,), (1,): (0,)}
    assert recheck_certificate(f, rec, cert)


def test_termwise_gsum(gsum, gsum_result):
    s = backwardShifts(sumOver(gsum_result[1][0]))
    cert = checkTermwise(gsum, s, 1)
    assert cert.holds
    assert recheck_certificate(gsum, s, cert)
    doc = cert.to_json()
    assert doc["kind"] == "termwise_certificate" and len(doc["sShifts"]) == 4


def test_termwise_boundary(boundary_result):
    _, _, (_, s) = boundary_result
    f = pipeline.psum_boundary(pipeline.fixture_dir())
    cert = checkTermwise(f, s, 2)
    assert cert.holds
    assert recheck_certificate(f, s, cert)


def test_termwise_perturbed(boundary_result):
    _, _, (_, s) = boundary_result
    f = pipeline.psum_boundary(pipeline.fixture_dir())
    coeffs = dict(s.coeffs)
    coeffs[(0, 0, 0)] = coeffs[(0, 0, 0)] + s.ring.parse("q")
    bad = SumRecurrence(s.rec_vars, s.ring, coeffs)
    cert = checkTermwise(f, bad, 1)
    assert not cert.holds and cert.shifts == {}
    assert cert.candidates_tried == 3 ** 3
    assert not recheck_certificate(f, bad, cert)


def test_termwise_forged_certificate(boundary_result):
    _, _, (_, s) = boundary_result
    f = pipeline.psum_boundary(pipeline.fixture_dir())
    forged = TermwiseCertificate(True, f.name, s.rec_vars, f.table.sums, 0, 1, {k: (1 if k == (0, 0, 0) else 0,) for k in s.coeffs})
    assert not recheck_certificate(f, s, forged)


def test_termwise_argument_errors(psum):
    rec = one_var({(0,): "1", (1,): "-1"})
    with pytest.raises(SumRecurrenceError):
        checkTermwise(psum, rec, 0)
    with pytest.raises(ValueError):
        checkTermwise(constant_summand(), rec, -1)


def test_gsum_sum_recurrence_on_grid(gsum_result):
    """The brute-force g polynomials satisfy the summed recurrence."""
    s = backwardShifts(sumOver(gsum_result[1][0]))
    terms = pipeline.recurrence_terms(s)
    for k in range(4):
        @lru_cache(maxsize=None)
        def g(L1, L2, M, i, j):
            return gPoly(i, j, k, L1, L2, M)

        pts = grid_points({"L1": (0, 6), "L2": (0, 6), "M": (0, 6), "i": (0, 3), "j": (0, 3)})
        report = check_recurrence(terms, s.rec_vars, g, pts)
        assert report["status"] == "pass", report
