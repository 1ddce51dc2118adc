import json
from fractions import Fraction

import pytest

from qceline import pipeline
from qceline.oracle import BiLaurent, QPoly
from qceline.qterm import Summand
from qceline.qterm.evaluate import LaurentPoly

DATA = pipeline.fixture_dir()

ACCEPTANCE = []


def load(name):
    return Summand.from_json(json.loads((DATA / name).read_text(encoding="utf-8")))


def to_qpoly(v):
    """LaurentPoly in q alone -> oracle QPoly."""
    assert v.gens == ("q",) or not v.terms
    return QPoly.from_dict({e[0]: c for e, c in v.terms.items()})


def to_bilaurent(v):
    return BiLaurent({(e[0], e[1]): c for e, c in v.terms.items()})


def value_at(p, f, point):
    """A generator polynomial at an integer point, as a Laurent polynomial in q and the grounds."""
    table = f.table
    ring = p.ring
    grounds = tuple(table.grounds)
    gens = ("q",) + grounds
    out = {}
    for exps, c in p.sorted_terms():
        qe = 0
        gexp = [0] * len(grounds)
        for name, e in zip(ring.gens, exps):
            if not e:
                continue
            if name == "q":
                qe += e
            elif name in grounds:
                gexp[grounds.index(name)] += e
            else:
                qe += e * point[name[2:]]
        key = (qe, *gexp)
        out[key] = out.get(key, 0) + c
    return LaurentPoly(gens, out)


@pytest.fixture(scope="session")
def gsum():
    return load("gsum.json")


@pytest.fixture(scope="session")
def psum():
    return load("psum.json")


@pytest.fixture(scope="session")
def gsum_result():
    return pipeline.derive_gsum_kfree(DATA)


@pytest.fixture(scope="session")
def boundary_result():
    f, recs = pipeline.derive_boundary(DATA)
    return f, recs, pipeline.first_summable(recs)


@pytest.fixture(scope="session")
def delta_result():
    f, recs = pipeline.derive_delta(DATA)
    return f, recs, pipeline.first_summable(recs)


@pytest.fixture(scope="session")
def jacobi_result():
    f, recs = pipeline.derive_single(DATA, "jacobi_rhs.json")
    return f, recs, pipeline.first_summable(recs)


@pytest.fixture(scope="session")
def euler_result():
    f, recs = pipeline.derive_single(DATA, "euler_rhs.json")
    return f, recs, pipeline.first_summable(recs)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, text in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {text}")


def frac(x):
    return Fraction(x)
