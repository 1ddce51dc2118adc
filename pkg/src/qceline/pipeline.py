"""The scripted proof: each step derives a recurrence or checks an identity and compares with the reference."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra import PolyRing
from .celine import KFreeRecurrence, checkKFree, findRecurrences, normalize_coeffs, poly_to_json
from .oracle import check_recurrence, delta_solution, grid_points, pPoly, verifyGrid
from .oracle.identities import euler_left, jacobi_left
from .qterm import Summand
from .structset import StructureSet, load_structure_set, rectangular, verbaetenComplete
from .sumrec import (CollapseError, SumRecurrence, backwardShifts, checkTermwise,
                     forward_shifts, from_forward, sumOver)

SCHEMA_VERSION = 1

FIXTURES = ("gsum.json", "psum.json", "jacobi_rhs.json", "euler_rhs.json",
            "structset_in5.json", "structset_in10.json")


class StepFailure(RuntimeError):
    def __init__(self, step: str, message: str):
        super().__init__(f"step {step}: {message}")
        self.step = step


def fixture_dir() -> Path:
    return Path(str(resources.files("qceline") / "data"))


def resolve_fixture(name: str, root: Optional[Path] = None) -> Path:
    """A path as given, or else a bundled fixture of that name."""
    p = Path(name)
    if p.exists():
        return p
    cand = (root or fixture_dir()) / (name if name.endswith(".json") else name + ".json")
    return cand if cand.exists() else p


def load_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_summand(path) -> Summand:
    return Summand.from_json(load_json(path))


def prepare(f: Summand, substitutions: Mapping[str, str] = None,
            rec: Optional[Sequence[str]] = None, sums: Optional[Sequence[str]] = None) -> Summand:
    if substitutions:
        f = f.substitute(dict(substitutions))
    if rec is not None or sums is not None:
        f = f.reclassify(rec=rec, sums=sums)
    return f


def structure_for(f: Summand, struct: Optional[StructureSet] = None,
                  rect: Optional[Tuple[Sequence[int], Sequence[int]]] = None,
                  complete: bool = False) -> StructureSet:
    if struct is None:
        if rect is None:
            raise ValueError("a structure set or rectangle dimensions are required")
        struct = rectangular(*rect)
    if complete:
        struct = verbaetenComplete(f, struct)
    return struct


def first_summable(recs: Sequence[KFreeRecurrence]) -> Tuple[KFreeRecurrence, SumRecurrence]:
    """The first recurrence whose sum over the summation variables does not collapse."""
    for r in recs:
        try:
            return r, backwardShifts(sumOver(r))
        except CollapseError:
            continue
    raise CollapseError()


# reference recurrences, as polynomials in the generators of the coefficient ring


def _kfree_reference(ring: PolyRing, terms: Mapping[Tuple[int, ...], str]):
    return normalize_coeffs({s: ring.parse(t) for s, t in terms.items()})


def _sum_reference(rec_vars, ring: PolyRing, terms: Mapping[Tuple[int, ...], str]) -> SumRecurrence:
    return SumRecurrence(tuple(rec_vars), ring, {s: ring.parse(t) for s, t in terms.items()}).normalized()


GSUM_KFREE = {
    (1, 2, 1, 1, 1, 1, 0, 0): "q_k*q_L2",
    (1, 1, 1, 0, 1, 0, 0, 0): "q_k*q_L2",
    (0, 1, 0, 0, 0, 0, 0, 0): "q_k",
    (0, 0, 0, 0, 0, 0, 0, 0): "-q_k",
}
GSUM_SUM = {
    (1, 2, 1, 1, 1): "q_L2",
    (1, 1, 1, 0, 1): "q_L2",
    (0, 1, 0, 0, 0): "1",
    (0, 0, 0, 0, 0): "-1",
}
GSUM_SUM_TEXT = ("q^{L2} SUM(-1+L1,-2+L2,-1+M,-1+i,-1+j) + q^{L2} SUM(-1+L1,-1+L2,-1+M,i,-1+j)"
                 " + SUM(L1,-1+L2,M,i,j) - SUM(L1,L2,M,i,j) = 0")
BOUNDARY_SUM = {(1, 1, 1): "q_L1", (1, 0, 0): "1", (0, 0, 0): "-1"}
BOUNDARY_SUM_TEXT = "q^{L1} SUM(-1+L1,-1+M,-1+i) + SUM(-1+L1,M,i) - SUM(L1,M,i) = 0"
# multiplied through by q^3 to clear negative powers of q
DELTA_SUM = {
    (1, 1, 1, 2): "q^2*q_Delta^2*q_i^2*q_j^2",
    (1, 1, 1, 1): "q_Delta*q_i^3*q_j^3",
    (1, 1, 0, 1): "q^3*q_Delta*q_i*q_j - q^2*q_Delta*q_i^2*q_j^2",
    (1, 0, 1, 1): "q^3*q_Delta*q_i*q_j - q^2*q_Delta*q_i^2*q_j^2",
    (1, 0, 0, 1): "q^3*q_Delta*q_i*q_j",
    (1, 0, 0, 0): "q^3",
    (0, 1, 1, 1): "-q^2*q_Delta*q_i^2*q_j^2",
    (0, 0, 0, 0): "-q^3",
}
# forward offsets j: coefficient of SUM(L + j)
JACOBI_FORWARD = {
    (0,): "-alpha*q^9*q_L^3",
    (1,): "q^7*q_L^2*(1 - alpha + alpha^2 + alpha*q^2*q_L)",
    (2,): "-(1 - alpha + alpha^2)*q^4*q_L*(-1 + q^3*q_L)",
    (3,): "-alpha - q^4*q_L + alpha*q^4*q_L - alpha^2*q^4*q_L",
    (4,): "alpha",
}
EULER_FORWARD = {
    (0,): "-q^14*q_L^6",
    (1,): "q^12*q_L^4*(1 + q^4*q_L^2)",
    (2,): "-q^6*q_L^2*(-1 + q^3*q_L)*(1 + q^3*q_L)",
    (3,): "-1 - q^8*q_L^2",
    (4,): "1",
}

BOUNDARY_SUBST = {"L2": "i+j-1"}
BOUNDARY_VARS = (["L1", "M", "i"], ["ab", "ac", "bc"])
DELTA_SUBST = {"L1": "i+j-1", "L2": "i+j-1", "M": "Delta+i+j"}
DELTA_VARS = (["Delta", "i", "j", "k"], ["ab", "ac", "bc"])


def derive_gsum_kfree(fixtures: Path) -> Tuple[Summand, List[KFreeRecurrence]]:
    f = load_summand(fixtures / "gsum.json")
    return f, findRecurrences(f, load_structure_set(fixtures / "structset_in5.json"))


def derive_boundary(fixtures: Path):
    f = prepare(load_summand(fixtures / "gsum.json"), BOUNDARY_SUBST, *BOUNDARY_VARS)
    recs = findRecurrences(f, structure_for(f, rect=((0, 0, 0), (0, 0, 1)), complete=True))
    return f, recs


def derive_delta(fixtures: Path):
    f = prepare(load_summand(fixtures / "gsum.json"), DELTA_SUBST, *DELTA_VARS)
    return f, findRecurrences(f, load_structure_set(fixtures / "structset_in10.json"))


def derive_single(fixtures: Path, name: str):
    f = load_summand(fixtures / name)
    return f, findRecurrences(f, structure_for(f, rect=((2,), (0, 0, 0)), complete=True))


def psum_boundary(fixtures: Path) -> Summand:
    return prepare(load_summand(fixtures / "psum.json"), BOUNDARY_SUBST, BOUNDARY_VARS[0], ["s"])


def coefficient_data(c) -> list:
    return [(dict(m), v) for m, v in poly_to_json(c)]


def recurrence_terms(rec: SumRecurrence, forward: bool = False):
    """``(shift, coefficient data)`` pairs for the oracle; forward offsets become negative shifts."""
    if forward:
        return [(tuple(-x for x in j), coefficient_data(c)) for j, c in sorted(forward_shifts(rec).items())]
    return [(s, coefficient_data(c)) for s, c in sorted(rec.coeffs.items())]


# transcript


@dataclass
class Step:
    id: str
    command: str
    inputs: Tuple[str, ...]
    run: Callable[["Context"], Tuple[dict, Dict[str, bool]]]
    oracle_only: bool = False


class Context:
    def __init__(self, fixtures: Path):
        self.fixtures = fixtures
        self.results: Dict[str, object] = {}


def _require(step: str, checks: Mapping[str, bool]):
    bad = [k for k, v in checks.items() if not v]
    if bad:
        raise StepFailure(step, "failed checks: " + ", ".join(bad))


def _kfree_doc(rec: KFreeRecurrence) -> dict:
    return {"recurrence": rec.to_json(), "rendering": rec.render()}


def _sum_doc(rec: SumRecurrence, forward: bool = False) -> dict:
    return {"recurrence": rec.to_json(), "rendering": rec.render(forward=forward)}


def _step_gsum_kfree(ctx: Context):
    f, recs = derive_gsum_kfree(ctx.fixtures)
    if not recs:
        raise StepFailure("gsum_kfree", "no recurrence found")
    rec = recs[0]
    ctx.results["gsum"] = (f, rec)
    ref = _kfree_reference(rec.ring, GSUM_KFREE)
    return _kfree_doc(rec), {"matches_reference": rec.coeffs == ref, "kfree_certificate": checkKFree(f, rec)}


def _step_gsum_sum(ctx: Context):
    f, rec = ctx.results["gsum"]
    s = backwardShifts(sumOver(rec))
    ctx.results["gsum_sum"] = s
    ref = _sum_reference(s.rec_vars, s.ring, GSUM_SUM)
    return _sum_doc(s), {"matches_reference": s.coeffs == ref.coeffs, "rendering": s.render() == GSUM_SUM_TEXT,
                         "termwise_for_gsum": checkTermwise(f, s, 1).holds}


PSUM_GRID = {"L1": (-1, 5), "L2": (-1, 5), "M": (-1, 5), "i": (0, 3), "j": (0, 3)}


def psum_grid_report(rec: SumRecurrence, ranges: Mapping[str, Tuple[int, int]] = PSUM_GRID, ks=range(4)) -> dict:
    """Does the bounded sum itself satisfy ``rec`` at every grid point, for each fixed ``k``?"""
    terms = recurrence_terms(rec)
    points = grid_points(ranges)
    total = 0
    for k in ks:
        report = check_recurrence(terms, rec.rec_vars, lambda L1, L2, M, i, j: pPoly(i, j, k, L1, L2, M), points)
        total += report["points"]
        if report["status"] != "pass":
            report["counterexample"]["point"]["k"] = k
            return {**report, "points": total}
    return {"status": "pass", "points": total, "ranges": {**{n: list(r) for n, r in ranges.items()},
                                                          "k": [min(ks), max(ks)]}}


def _step_psum_check(ctx: Context):
    """The termwise certificate is attempted first; when none exists in the window the
    step falls back to checking the bounded sum on a grid, and says so."""
    f = load_summand(ctx.fixtures / "psum.json")
    rec = ctx.results["gsum_sum"]
    cert = checkTermwise(f, rec, 2)
    doc = {"termwise": cert.to_json()}
    if cert.holds:
        return doc, {"termwise": True}
    doc["grid"] = psum_grid_report(rec)
    return doc, {"grid": doc["grid"]["status"] == "pass"}


def _step_boundary(ctx: Context):
    f, recs = derive_boundary(ctx.fixtures)
    kfree, s = first_summable(recs)
    ctx.results["boundary_sum"] = s
    ref = _sum_reference(s.rec_vars, s.ring, BOUNDARY_SUM)
    doc = {"kfree": _kfree_doc(kfree), "sum": _sum_doc(s)}
    return doc, {"kfree_certificate": checkKFree(f, kfree), "matches_reference": s.coeffs == ref.coeffs,
                 "rendering": s.render() == BOUNDARY_SUM_TEXT}


def _step_boundary_check(ctx: Context):
    cert = checkTermwise(psum_boundary(ctx.fixtures), ctx.results["boundary_sum"], 2)
    return {"termwise": cert.to_json()}, {"termwise": cert.holds}


def _step_delta(ctx: Context):
    f, recs = derive_delta(ctx.fixtures)
    kfree, s = first_summable(recs)
    ctx.results["delta_sum"] = s
    ref = _sum_reference(s.rec_vars, s.ring, DELTA_SUM)
    doc = {"kfree": _kfree_doc(kfree), "sum": _sum_doc(s)}
    return doc, {"kfree_certificate": checkKFree(f, kfree), "matches_reference": s.coeffs == ref.coeffs}


def delta_solution_reports(rec: SumRecurrence) -> Dict[str, dict]:
    def seq(Delta, i, j, k):
        return delta_solution(i, j, k, Delta)

    terms = recurrence_terms(rec)
    out = {}
    for v in (0, 1):
        pts = grid_points({"Delta": (-2, 6), "i": (v, v), "j": (v, v), "k": (0, 5)})
        out[f"i=j={v}"] = check_recurrence(terms, rec.rec_vars, seq, pts)
    return out


def _step_delta_solution(ctx: Context):
    reports = delta_solution_reports(ctx.results["delta_sum"])
    return reports, {k: r["status"] == "pass" for k, r in reports.items()}


def _step_delta_base(ctx: Context):
    report = verifyGrid("g_delta_zero")
    return report, {"grid": report["status"] == "pass"}


def _single(ctx: Context, key: str, name: str, reference: Mapping):
    f, recs = derive_single(ctx.fixtures, name)
    kfree, s = first_summable(recs)
    ctx.results[key] = s
    ref = from_forward(s.rec_vars, s.ring, {j: s.ring.parse(t) for j, t in reference.items()})
    doc = {"kfree": _kfree_doc(kfree), "sum": _sum_doc(s, forward=True)}
    return doc, {"kfree_certificate": checkKFree(f, kfree), "matches_reference": s.coeffs == ref.coeffs,
                 "order": max(j[0] for j in forward_shifts(s)) == 4}


def single_base_reports(identity: str, rec: SumRecurrence, left, ground: Optional[str]) -> Dict[str, dict]:
    base = verifyGrid(identity, {"L": (0, 3)})
    sides = verifyGrid(identity, {"L": (0, 8)})
    rec_report = check_recurrence(recurrence_terms(rec, forward=True), rec.rec_vars, lambda L: left(L),
                                  grid_points({"L": (0, 12)}), ground=ground)
    return {"base_cases": base, "sides": sides, "left_side_recurrence": rec_report}


def _single_base(ctx: Context, key: str, identity: str, left, ground):
    reports = single_base_reports(identity, ctx.results[key], left, ground)
    return reports, {k: r["status"] == "pass" for k, r in reports.items()}


GRID_IDENTITIES = ("g_eq_p", "p_double", "double_single", "g_eq_p_boundary", "g_delta_boundary",
                   "g_l1_recursion", "g_l1_boundary")


def _grid_step(identity: str):
    def run(ctx: Context):
        report = verifyGrid(identity)
        return report, {"grid": report["status"] == "pass"}
    return run


STEPS: List[Step] = [
    Step("gsum_kfree", "find-rec --summand gsum.json --struct structset_in5.json",
         ("gsum.json", "structset_in5.json"), _step_gsum_kfree),
    Step("gsum_sum", "sum-rec", (), _step_gsum_sum),
    Step("psum_check", "check-rec --summand psum.json --window 2", ("psum.json",), _step_psum_check),
    Step("boundary_kfree", "find-rec --summand gsum.json --substitute L2=i+j-1 --rec L1,M,i --rect 0:0:0,0:0:1 --complete",
         ("gsum.json",), _step_boundary),
    Step("boundary_check", "check-rec --summand psum.json --substitute L2=i+j-1 --rec L1,M,i --window 2",
         ("psum.json",), _step_boundary_check),
    Step("delta_kfree", "find-rec --summand gsum.json --substitute L1=i+j-1 --substitute L2=i+j-1 "
         "--substitute M=Delta+i+j --rec Delta,i,j,k --struct structset_in10.json",
         ("gsum.json", "structset_in10.json"), _step_delta),
    Step("delta_solution", "verify delta solution", (), _step_delta_solution),
    Step("delta_base", "verify g_delta_zero", (), _step_delta_base, oracle_only=True),
    Step("jacobi_rec", "find-rec --summand jacobi_rhs.json --rect 2,0:0:0 --complete", ("jacobi_rhs.json",),
         lambda ctx: _single(ctx, "jacobi", "jacobi_rhs.json", JACOBI_FORWARD)),
    Step("jacobi_base", "verify jacobi --grid L=0..3", (),
         lambda ctx: _single_base(ctx, "jacobi", "jacobi", jacobi_left, "alpha")),
    Step("euler_rec", "find-rec --summand euler_rhs.json --rect 2,0:0:0 --complete", ("euler_rhs.json",),
         lambda ctx: _single(ctx, "euler", "euler_rhs.json", EULER_FORWARD)),
    Step("euler_base", "verify euler --grid L=0..3", (),
         lambda ctx: _single_base(ctx, "euler", "euler", euler_left, None)),
] + [Step(f"grid_{name}", f"verify {name}", (), _grid_step(name), oracle_only=True) for name in GRID_IDENTITIES]


def sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def run_transcript(fixtures: Optional[Path] = None, grid_only: bool = False,
                   log: Callable[[str], None] = lambda s: None) -> dict:
    """Run every step in order; raises :class:`StepFailure` naming the first step that fails."""
    fixtures = Path(fixtures) if fixtures else fixture_dir()
    ctx = Context(fixtures)
    transcript = {"schema_version": SCHEMA_VERSION, "kind": "proof_transcript", "steps": []}
    for step in STEPS:
        if grid_only and not step.oracle_only:
            continue
        try:
            inputs = {name: sha256(fixtures / name) for name in step.inputs}
        except OSError as exc:
            raise StepFailure(step.id, f"cannot read fixture: {exc}") from None
        t0 = time.perf_counter()
        try:
            output, checks = step.run(ctx)
        except StepFailure:
            raise
        except Exception as exc:
            raise StepFailure(step.id, f"{type(exc).__name__}: {exc}") from exc
        duration = round(time.perf_counter() - t0, 3)
        transcript["steps"].append({"id": step.id, "command": step.command, "inputs": inputs,
                                    "output": output, "checks": checks, "duration": duration})
        log(f"{step.id}: {'pass' if all(checks.values()) else 'FAIL'} ({duration:.1f}s)")
        _require(step.id, checks)
    return transcript
