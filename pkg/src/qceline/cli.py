"""Command-line front end.

Exit status: 0 on success, 1 when the mathematics fails (no recurrence, collapse,
mismatch), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import pipeline
from .celine import KFreeRecurrence, checkKFree, findRecurrences
from .oracle import IDENTITIES, parse_grid, verifyGrid
from .qterm import FormError, Summand
from .structset import StructureSetError, load_structure_set
from .sumrec import CollapseError, SumRecurrence, backwardShifts, checkTermwise, sumOver

SCHEMA_VERSION = 1

OK, MATH_FAILURE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _write(doc: dict, path: Optional[str]):
    text = json.dumps(doc, indent=1, ensure_ascii=False) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")


def _load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict) or "schema_version" not in doc:
        raise UsageError(f"{path}: missing schema_version")
    return doc


def _names(text: Optional[str]) -> Optional[List[str]]:
    return None if text is None else [t for t in text.split(",") if t]


def _substitutions(items) -> dict:
    out = {}
    for item in items or []:
        name, sep, form = item.partition("=")
        if not sep or not name.strip() or not form.strip():
            raise UsageError(f"bad --substitute {item!r}, expected NAME=LINFORM")
        out[name.strip()] = form.strip()
    return out


def _tuple(text: str) -> tuple:
    return tuple(int(x) for x in text.split(":")) if text else ()


def _rect(text: str):
    """``I,J`` with each side a colon-separated tuple, e.g. ``2,0:0:0``."""
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"bad --rect {text!r}, expected I,J such as 2,0:0:0")
    try:
        return _tuple(parts[0]), _tuple(parts[1])
    except ValueError:
        raise UsageError(f"bad --rect {text!r}") from None


def _summand(args):
    f = Summand.from_json(_load(str(pipeline.resolve_fixture(args.summand))))
    return pipeline.prepare(f, _substitutions(args.substitute), _names(args.rec), _names(args.sum))


def cmd_find_rec(args) -> int:
    f = _summand(args)
    if args.struct and args.rect:
        raise UsageError("give either --struct or --rect, not both")
    if args.struct:
        struct = load_structure_set(pipeline.resolve_fixture(args.struct))
    elif args.rect:
        struct = None
    else:
        raise UsageError("find-rec needs --struct FILE or --rect I,J")
    rect = _rect(args.rect) if args.rect else None
    struct = pipeline.structure_for(f, struct, rect, args.complete)
    recs = findRecurrences(f, struct)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "kfree_recurrences",
        "summand": f.name,
        "structure": struct.to_json(),
        "recurrences": [{"recurrence": r.to_json(), "rendering": r.render(), "kfree_certificate": checkKFree(f, r)}
                        for r in recs],
    }
    _write(doc, args.out)
    if not recs:
        print("no recurrence found", file=sys.stderr)
        return MATH_FAILURE
    for r in doc["recurrences"]:
        print(r["rendering"])
    return OK


def _kfree_list(doc: dict) -> List[KFreeRecurrence]:
    kind = doc.get("kind")
    if kind == "kfree_recurrences":
        return [KFreeRecurrence.from_json(r["recurrence"]) for r in doc["recurrences"]]
    if kind == "kfree_recurrence":
        return [KFreeRecurrence.from_json(doc)]
    raise UsageError(f"expected a k-free recurrence document, got kind {kind!r}")


def cmd_sum_rec(args) -> int:
    recs = _kfree_list(_load(args.input))
    if not recs:
        print("no recurrence to sum", file=sys.stderr)
        return MATH_FAILURE
    try:
        if args.index is not None:
            s = backwardShifts(sumOver(recs[args.index]))
        else:
            _, s = pipeline.first_summable(recs)
    except IndexError:
        raise UsageError(f"--index {args.index} out of range") from None
    except CollapseError as exc:
        print(exc, file=sys.stderr)
        return MATH_FAILURE
    doc = s.to_json()
    doc["rendering"] = s.render(forward=args.forward)
    _write(doc, args.out)
    print(doc["rendering"])
    return OK


def cmd_check_rec(args) -> int:
    f = _summand(args)
    doc = _load(args.input)
    try:
        rec = SumRecurrence.from_json(doc)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"{args.input}: {exc}") from None
    cert = checkTermwise(f, rec, args.window)
    _write(cert.to_json(), args.out)
    print("True" if cert.holds else f"no termwise witness within window {args.window}")
    return OK if cert.holds else MATH_FAILURE


def cmd_verify(args) -> int:
    if args.identity not in IDENTITIES:
        raise UsageError(f"unknown identity {args.identity!r}; known: {', '.join(sorted(IDENTITIES))}")
    try:
        report = verifyGrid(args.identity, parse_grid(args.grid))
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    doc = {"schema_version": SCHEMA_VERSION, "kind": "grid_report", **report}
    _write(doc, args.out)
    line = f"{args.identity}: {report['status']} ({report['points']} points)"
    if report["status"] != "pass":
        line += f", first mismatch at {report['counterexample']['point']}"
    print(line)
    return OK if report["status"] == "pass" else MATH_FAILURE


def cmd_paper(args) -> int:
    fixtures = Path(args.fixtures) if args.fixtures else None
    try:
        transcript = pipeline.run_transcript(fixtures, args.grid_only, log=print)
    except pipeline.StepFailure as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return MATH_FAILURE
    _write(transcript, args.transcript)
    print(f"{len(transcript['steps'])} steps passed")
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qceline", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def summand_opts(p):
        p.add_argument("--summand", required=True, metavar="FILE", help="summand JSON (or a bundled fixture name)")
        p.add_argument("--substitute", action="append", metavar="NAME=LINFORM",
                       help="replace an integer symbol by a linear form; repeatable")
        p.add_argument("--rec", metavar="VARS", help="comma-separated recurrence variables")
        p.add_argument("--sum", metavar="VARS", help="comma-separated summation variables")

    p = sub.add_parser("find-rec", help="find k-free recurrences of a summand")
    summand_opts(p)
    p.add_argument("--struct", metavar="FILE", help="structure set JSON")
    p.add_argument("--rect", metavar="I,J", help="rectangular structure set, e.g. 2,0:0:0")
    p.add_argument("--complete", action="store_true", help="grow the structure set by completion first")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_find_rec)

    p = sub.add_parser("sum-rec", help="sum a k-free recurrence over the summation variables")
    p.add_argument("input", metavar="RECURRENCE_FILE")
    p.add_argument("--index", type=int, help="which recurrence of the file (default: first that does not collapse)")
    p.add_argument("--forward", action="store_true", help="render with forward shifts")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_sum_rec)

    p = sub.add_parser("check-rec", help="check a sum recurrence termwise against a summand")
    summand_opts(p)
    p.add_argument("input", metavar="SUM_RECURRENCE_FILE")
    p.add_argument("--window", type=int, default=0, metavar="N")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_check_rec)

    p = sub.add_parser("verify", help="check an identity on a grid with the brute-force evaluator")
    p.add_argument("identity", help=", ".join(sorted(IDENTITIES)))
    p.add_argument("--grid", metavar="SPEC", help="e.g. i=0..3,L1=-2..7")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("paper", help="run the complete scripted proof and write a transcript")
    p.add_argument("--transcript", metavar="FILE")
    p.add_argument("--fixtures", metavar="DIR", help="directory holding the input fixtures")
    p.add_argument("--grid-only", action="store_true", help="run only the brute-force grid steps")
    p.set_defaults(func=cmd_paper)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "window", 0) < 0:
        parser.error("--window must be non-negative")
    try:
        return args.func(args)
    except (UsageError, FormError, StructureSetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (ValueError, KeyError, TypeError) as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
