"""Structure sets: the shift supports of a k-free recurrence ansatz."""

from __future__ import annotations

import itertools
import json
from typing import Iterable, Sequence, Tuple

SCHEMA_VERSION = 1


class StructureSetError(ValueError):
    pass


class StructureSet:
    """A non-empty, sorted set of equal-length integer tuples.

    Each tuple lists recurrence-variable shifts first, then summation-variable
    shifts; ``n_rec`` records where the split is when it is known.
    """

    __slots__ = ("tuples", "n_rec")

    def __init__(self, tuples: Iterable[Sequence[int]], n_rec: int = None):
        tuples = sorted({tuple(int(x) for x in t) for t in tuples})
        if not tuples:
            raise StructureSetError("a structure set must not be empty")
        width = len(tuples[0])
        if any(len(t) != width for t in tuples):
            raise StructureSetError("structure set tuples have different lengths")
        if n_rec is not None and not 0 <= n_rec <= width:
            raise StructureSetError(f"n_rec={n_rec} does not fit tuples of length {width}")
        self.tuples: Tuple[Tuple[int, ...], ...] = tuple(tuples)
        self.n_rec = n_rec

    @property
    def width(self) -> int:
        return len(self.tuples[0])

    def __len__(self):
        return len(self.tuples)

    def __iter__(self):
        return iter(self.tuples)

    def __contains__(self, t):
        return tuple(t) in set(self.tuples)

    def __eq__(self, other):
        return isinstance(other, StructureSet) and self.tuples == other.tuples

    def __hash__(self):
        return hash(self.tuples)

    def __repr__(self):
        return f"StructureSet({[list(t) for t in self.tuples]})"

    def issuperset(self, other: "StructureSet") -> bool:
        return set(self.tuples) >= set(other.tuples)

    def union(self, extra: Iterable[Sequence[int]]) -> "StructureSet":
        return StructureSet(list(self.tuples) + [tuple(t) for t in extra], self.n_rec)

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "kind": "structure_set", "tuples": [list(t) for t in self.tuples]}


def rectangular(I: Sequence[int], J: Sequence[int]) -> StructureSet:
    """All ``(i, j)`` with ``0 <= i_l <= I_l`` and ``0 <= j_m <= J_m``."""
    dims = list(I) + list(J)
    if any(d < 0 for d in dims):
        raise StructureSetError("rectangle dimensions must be non-negative")
    return StructureSet(itertools.product(*(range(d + 1) for d in dims)), n_rec=len(I))


def parseStructureSet(obj) -> StructureSet:
    """Accept a list of tuples or a ``{"tuples": [...]}`` document."""
    if isinstance(obj, dict):
        if "tuples" not in obj:
            raise StructureSetError("structure set document lacks 'tuples'")
        obj = obj["tuples"]
    if not isinstance(obj, list):
        raise StructureSetError("structure set must be a list of integer lists")
    for t in obj:
        if not isinstance(t, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in t):
            raise StructureSetError(f"bad structure set tuple {t!r}")
    return StructureSet(obj)


def load_structure_set(path) -> StructureSet:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise StructureSetError(f"{path}: {exc}") from None
    return parseStructureSet(doc)


def neighbours(s: StructureSet) -> list:
    """Candidates for completion: non-negative points at l-infinity distance 1 from the set,
    inside the bounding box grown by one, in lexicographic order."""
    present = set(s.tuples)
    lo = [max(0, min(t[i] for t in s.tuples) - 1) for i in range(s.width)]
    hi = [max(t[i] for t in s.tuples) + 1 for i in range(s.width)]
    found = set()
    for t in s.tuples:
        for d in itertools.product((-1, 0, 1), repeat=s.width):
            c = tuple(x + y for x, y in zip(t, d))
            if c in present or c in found:
                continue
            if all(l <= x <= h for x, l, h in zip(c, lo, hi)):
                found.add(c)
    return sorted(found)


def verbaetenComplete(f, s0: StructureSet, max_sweeps: int = 50, strict: bool = True) -> StructureSet:
    """Grow ``s0`` by shifts that add unknowns without raising the degree of the
    cleared polynomials, sweeping over neighbours until a fixed point.

    A candidate is accepted when either every q-factorial argument involving a
    summation variable stays within the range of decrements already present,
    or, with the denominators merged into one least common multiple, it needs
    no new denominator factor and has no higher degree in any summation
    generator than the polynomials already present.

    Some summands (a constant one, say) accept every neighbour forever; with
    ``strict=False`` the set reached after ``max_sweeps`` sweeps is returned
    instead of raising.
    """
    from .celine import Ansatz

    current = StructureSet(s0.tuples, s0.n_rec)
    for _ in range(max_sweeps):
        ansatz = Ansatz(f, current)
        degrees = ansatz.elimination_degrees()
        ranges = ansatz.factorial_ranges()
        accepted = [c for c in neighbours(current)
                    if ansatz.within_ranges(c, ranges) or ansatz.fits(c, degrees)]
        if not accepted:
            return current
        current = current.union(accepted)
    if not strict:
        return current
    raise StructureSetError(f"completion did not reach a fixed point within {max_sweeps} sweeps")
