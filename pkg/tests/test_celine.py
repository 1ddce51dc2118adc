import json
import random

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from qceline import pipeline
from qceline.algebra import PolyMatrix, PolyRing, nullspace
from qceline.celine import (Ansatz, CelineError, KFreeRecurrence, checkKFree, findRecurrence, findRecurrences,
                            kernel_circuits, normalize_coeffs)
from qceline.structset import rectangular

from conftest import DATA, load, value_at

OUT5_RENDERING = ("q^{L2} F(-1+L1,-2+L2,-1+M,-1+i,-1+j,-1+ab,ac,bc) + q^{L2} F(-1+L1,-1+L2,-1+M,i,-1+j,ab,ac,bc)"
                  " + F(L1,-1+L2,M,i,j,ab,ac,bc) - F(L1,L2,M,i,j,ab,ac,bc) = 0")


def transcribed_out5(ring):
    return KFreeRecurrence(("L1", "L2", "M", "i", "j"), ("ab", "ac", "bc"), ring, tuple(sorted(pipeline.GSUM_KFREE)),
                           {s: ring.parse(t) for s, t in pipeline.GSUM_KFREE.items()})


def test_out5_exact(gsum_result):
    f, recs = gsum_result
    assert len(recs) == 1
    rec = recs[0]
    want = normalize_coeffs({s: rec.ring.parse(t) for s, t in pipeline.GSUM_KFREE.items()})
    assert rec.coeffs == want
    assert rec.render() == OUT5_RENDERING


def test_every_found_recurrence_checks(gsum_result, boundary_result, delta_result):
    for f, recs in [gsum_result, boundary_result[:2], delta_result[:2]]:
        assert recs
        for r in recs:
            assert checkKFree(f, r)


def test_transcribed_out5_checks(gsum, gsum_result):
    ring = gsum_result[1][0].ring
    assert checkKFree(gsum, transcribed_out5(ring))


@pytest.mark.parametrize("shift", sorted(pipeline.GSUM_KFREE))
def test_perturbed_out5_fails(gsum, gsum_result, shift):
    rec = transcribed_out5(gsum_result[1][0].ring)
    rec.coeffs[shift] = rec.coeffs[shift] + 1
    assert not checkKFree(gsum, rec)


def test_k_free(gsum_result, delta_result):
    for f, recs in [gsum_result, delta_result[:2]]:
        elim = {f"q_{v}" for v in f.table.sums}
        for r in recs:
            assert not elim & set(r.ring.gens)
            assert all(c.ring == r.ring for c in r.coeffs.values())


def test_normalization_rules(gsum_result):
    rec = gsum_result[1][0]
    ring = rec.ring
    times = {s: c * ring.parse("1-q") for s, c in rec.coeffs.items()}
    assert normalize_coeffs(times) == rec.coeffs
    assert normalize_coeffs({s: -c for s, c in rec.coeffs.items()}) == rec.coeffs
    assert normalize_coeffs({s: c * 6 for s, c in rec.coeffs.items()}) == rec.coeffs
    assert rec.normalized().coeffs == rec.coeffs
    assert normalize_coeffs({}) == {}


def test_origin_structure_gives_nothing(gsum, psum):
    assert findRecurrences(gsum, rectangular((0,) * 5, (0,) * 3)) == []
    assert findRecurrence(psum, [(0,) * 6]) is None


def test_constant_summand_recurrence():
    from qceline.qterm import Summand
    f = Summand.from_json({"variables": [{"name": "n", "class": "rec"}, {"name": "k", "class": "sum"}],
                           "factors": []})
    recs = findRecurrences(f, [(0, 0), (1, 0)])
    assert len(recs) == 1
    assert {s: str(c) for s, c in recs[0].coeffs.items()} == {(0, 0): "1", (1, 0): "-1"}


def test_variables_must_match(gsum, psum, gsum_result):
    with pytest.raises(CelineError):
        checkKFree(psum, gsum_result[1][0])


def test_json_roundtrip(gsum_result):
    rec = gsum_result[1][0]
    again = KFreeRecurrence.from_json(json.loads(json.dumps(rec.to_json())))
    assert again.coeffs == rec.coeffs and again.structure == rec.structure
    assert again.render() == rec.render()
    with pytest.raises(ValueError):
        KFreeRecurrence.from_json({"kind": "other"})


def _numeric_residual(f, rec, point):
    total = None
    for s, c in rec.coeffs.items():
        back = dict(point)
        for name, d in zip(rec.rec_vars + rec.sum_vars, s):
            back[name] -= d
        term = value_at(c, f, point) * f.evaluate(back)
        total = term if total is None else total + term
    return total


def _soundness(f, rec, ranges, seed, n=60):
    rnd = random.Random(seed)
    live = 0
    for _ in range(n):
        point = {name: rnd.randint(*ranges.get(name, (0, 1))) for name in f.table.integer_symbols}
        point.update({name: 0 for name in point if name.startswith("eps_")})
        assert _numeric_residual(f, rec, point).is_zero(), point
        live += not f.evaluate(point).is_zero()
    return live


def test_numeric_soundness(gsum, gsum_result):
    ranges = {"L1": (2, 7), "L2": (2, 7), "M": (2, 7), "i": (1, 3), "j": (1, 3), "k": (0, 3)}
    assert _soundness(gsum, gsum_result[1][0], ranges, 3) >= 10


def test_numeric_soundness_boundary(boundary_result):
    f, _, (kfree, _) = boundary_result
    ranges = {"L1": (2, 6), "M": (2, 6), "i": (1, 3), "j": (0, 2), "k": (0, 3)}
    assert _soundness(f, kfree, ranges, 4) >= 10


# the modular kernel against plain elimination

def _span_equal(m, a, b):
    """Same kernel dimension, every vector a kernel element."""
    assert len(a) == len(b)
    for v in a + b:
        assert all(x.is_zero() for x in m.apply(v))


def test_kernel_on_real_system():
    f = load("gsum.json")
    from qceline.structset import load_structure_set
    s = load_structure_set(DATA / "structset_in5.json")
    _, m = Ansatz(f, s.tuples).matrix()
    order = list(range(m.ncols))
    _span_equal(m, kernel_circuits(m, order), nullspace(m))


_R = PolyRing(["q", "x"])


def _rank_deficient():
    entry = st.lists(st.tuples(st.lists(st.integers(0, 2), min_size=2, max_size=2), st.integers(-3, 3)),
                     max_size=2).map(_R.from_terms)
    rows = st.integers(1, 3).flatmap(lambda n: st.lists(st.lists(entry, min_size=4, max_size=4), min_size=n, max_size=n))
    return rows.map(lambda r: PolyMatrix(_R, r + [[a + b for a, b in zip(r[0], r[-1])]]))


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(_rank_deficient(), st.integers(0, 5))
def test_kernel_circuits_match_nullspace(m, seed):
    order = list(range(m.ncols))
    circ = kernel_circuits(m, order, seed)
    _span_equal(m, circ, nullspace(m))
