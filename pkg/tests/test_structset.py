import json

import pytest

from qceline import pipeline
from qceline.celine import Ansatz
from qceline.qterm import Summand
from qceline.structset import (StructureSet, StructureSetError, load_structure_set, neighbours, parseStructureSet,
                               rectangular, verbaetenComplete)

from conftest import DATA


def test_rectangular_counts():
    assert len(rectangular((0, 0, 0), (0, 0, 1))) == 2
    assert rectangular((0,), (0,)).tuples == ((0, 0),)
    assert len(rectangular((1, 1), (1,))) == 8
    assert rectangular((2,), (0, 0, 0)).n_rec == 1
    with pytest.raises(StructureSetError):
        rectangular((-1,), ())


def test_fixture_sets():
    s5 = load_structure_set(DATA / "structset_in5.json")
    s10 = load_structure_set(DATA / "structset_in10.json")
    assert (len(s5), s5.width) == (4, 8)
    assert (len(s10), s10.width) == (10, 7)
    assert (0,) * 8 in s5


@pytest.mark.parametrize("bad", [[], [[0, 1], [0]], [[0, "x"]], [[True]], "nope", {"other": []}, [3]])
def test_parse_errors(bad):
    with pytest.raises(StructureSetError):
        parseStructureSet(bad)


def test_parse_dedups_and_sorts():
    s = parseStructureSet([[1, 0], [0, 0], [1, 0]])
    assert s.tuples == ((0, 0), (1, 0))
    assert parseStructureSet({"tuples": [[0, 0], [1, 0]]}) == s
    assert parseStructureSet(s.to_json()) == s


def test_malformed_file(tmp_path):
    p = tmp_path / "s.json"
    p.write_text("[[0, 0], [1", encoding="utf-8")
    with pytest.raises(StructureSetError):
        load_structure_set(p)


def test_neighbours_are_adjacent_and_nonnegative():
    s = rectangular((1,), (0,))
    cands = neighbours(s)
    assert cands == sorted(cands)
    for c in cands:
        assert c not in s and min(c) >= 0
        assert any(max(abs(a - b) for a, b in zip(c, t)) == 1 for t in s)


def test_completion_of_constant_summand():
    f = Summand.from_json({"variables": [{"name": "n", "class": "rec"}, {"name": "k", "class": "sum"}],
                           "factors": []})
    s0 = rectangular((0,), (0,))
    with pytest.raises(StructureSetError, match="fixed point"):
        verbaetenComplete(f, s0, max_sweeps=3)
    done = verbaetenComplete(f, s0, max_sweeps=1, strict=False)
    assert set(done.tuples) == set(s0.tuples) | set(neighbours(s0))
    assert len(Ansatz(f, done).elimination_support()) == len(Ansatz(f, s0).elimination_support()) == 1


@pytest.fixture(scope="module")
def boundary_summand():
    return pipeline.prepare(pipeline.load_summand(DATA / "gsum.json"), pipeline.BOUNDARY_SUBST,
                            *pipeline.BOUNDARY_VARS)


@pytest.mark.slow
def test_completion_monotone_and_idempotent(boundary_summand):
    s0 = rectangular((0, 0, 0), (0, 0, 1))
    done = verbaetenComplete(boundary_summand, s0)
    assert done.issuperset(s0) and len(done) == 8
    assert verbaetenComplete(boundary_summand, done) == done


def test_fits_keeps_degree_profile(boundary_summand):
    s0 = rectangular((0, 0, 0), (0, 0, 1))
    ansatz = Ansatz(boundary_summand, s0)
    degrees = ansatz.elimination_degrees()
    for c in neighbours(s0):
        if ansatz.fits(c, degrees):
            assert Ansatz(boundary_summand, s0.union([c])).elimination_degrees() == degrees


def test_structure_json_roundtrip(tmp_path):
    s = load_structure_set(DATA / "structset_in10.json")
    p = tmp_path / "s.json"
    p.write_text(json.dumps(s.to_json()), encoding="utf-8")
    assert load_structure_set(p) == s
    assert StructureSet(s.tuples) == s
