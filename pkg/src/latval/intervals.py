"""Canonical finite unions of rational-endpoint intervals.

An ``IntervalSet`` is a sorted tuple of pairwise disjoint, non-adjacent
pieces, each with its own boundary kinds, so set equality is plain structural
equality.  Closed, open, half-open pieces and singletons are all stored
natively: the ring generated by closed and open intervals forces half-open
pieces under difference, and canonical forms keep equality decidable.

All operations are computed by atomizing the real line at the union of the
operands' endpoints: each endpoint is a point atom, each gap between
consecutive endpoints an open atom.  Membership of an atom in a canonical
set is decided exactly (point membership directly, open-atom membership at
the midpoint), the Boolean operation is applied atom by atom, and maximal
runs of kept atoms reassemble into canonical pieces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .oag import rat


@dataclass(frozen=True)
class Piece:
    lo: Fraction
    lo_closed: bool
    hi: Fraction
    hi_closed: bool

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"piece with lo={self.lo} > hi={self.hi}")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise ValueError("degenerate piece must be a closed singleton")

    def contains(self, x: Fraction) -> bool:
        if x == self.lo:
            return self.lo_closed if self.lo != self.hi else True
        if x == self.hi:
            return self.hi_closed
        return self.lo < x < self.hi

    def width(self) -> Fraction:
        return self.hi - self.lo

    def __str__(self) -> str:
        if self.lo == self.hi:
            return f"{{{self.lo}}}"
        lo_b = "[" if self.lo_closed else "("
        hi_b = "]" if self.hi_closed else ")"
        return f"{lo_b}{self.lo}, {self.hi}{hi_b}"


@dataclass(frozen=True)
class IntervalSet:
    pieces: tuple[Piece, ...]

    def __post_init__(self):
        prev = None
        for p in self.pieces:
            if prev is not None:
                gap_ok = prev.hi < p.lo or (
                    prev.hi == p.lo and not prev.hi_closed and not p.lo_closed
                )
                if not gap_ok:
                    raise ValueError(f"pieces {prev} and {p} overlap or are adjacent")
            prev = p

    def contains(self, x) -> bool:
        x = rat(x)
        return any(p.contains(x) for p in self.pieces)

    def is_empty(self) -> bool:
        return not self.pieces

    def endpoints(self) -> list[Fraction]:
        out = []
        for p in self.pieces:
            out.append(p.lo)
            out.append(p.hi)
        return out

    def __str__(self) -> str:
        if not self.pieces:
            return "∅"
        return " ∪ ".join(str(p) for p in self.pieces)

    def to_json_obj(self) -> list[dict]:
        return [
            {
                "lo": str(p.lo),
                "hi": str(p.hi),
                "lo_closed": p.lo_closed,
                "hi_closed": p.hi_closed,
            }
            for p in self.pieces
        ]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


EMPTY = IntervalSet(())


def interval(lo, hi, lo_closed: bool = True, hi_closed: bool = True) -> IntervalSet:
    """One interval as a set; the empty open singleton normalizes to the empty set."""
    lo, hi = rat(lo), rat(hi)
    if lo > hi:
        raise ValueError(f"interval with lo={lo} > hi={hi}")
    if lo == hi and not (lo_closed and hi_closed):
        return EMPTY
    return IntervalSet((Piece(lo, lo_closed, hi, hi_closed),))


def singleton(x) -> IntervalSet:
    x = rat(x)
    return IntervalSet((Piece(x, True, x, True),))


def _assemble(points: Sequence[Fraction], keep_flags: Sequence[bool]) -> IntervalSet:
    # Atoms alternate: pt p0, open (p0,p1), pt p1, ..., pt p_last.
    pieces: list[Piece] = []
    run_start: int | None = None
    n_atoms = len(keep_flags)

    def flush(start: int, end: int) -> None:
        # even atoms are the points themselves, odd atoms the open gaps
        lo = points[start // 2]
        hi = points[(end + 1) // 2]
        pieces.append(Piece(lo, start % 2 == 0, hi, end % 2 == 0))

    for i, kept in enumerate(keep_flags):
        if kept and run_start is None:
            run_start = i
        elif not kept and run_start is not None:
            flush(run_start, i - 1)
            run_start = None
    if run_start is not None:
        flush(run_start, n_atoms - 1)
    return IntervalSet(tuple(pieces))


def _combine(a: IntervalSet, b: IntervalSet, keep) -> IntervalSet:
    points = sorted(set(a.endpoints()) | set(b.endpoints()))
    if not points:
        return EMPTY
    flags: list[bool] = []
    for i, p in enumerate(points):
        flags.append(keep(a.contains(p), b.contains(p)))
        if i + 1 < len(points):
            mid = (p + points[i + 1]) / 2
            flags.append(keep(a.contains(mid), b.contains(mid)))
    return _assemble(points, flags)


def iset_meet(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return _combine(a, b, lambda x, y: x and y)


def iset_join(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return _combine(a, b, lambda x, y: x or y)


def iset_diff(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return _combine(a, b, lambda x, y: x and not y)


def iset_symmdiff(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return _combine(a, b, lambda x, y: x != y)


def iset_op(kind: str, a: IntervalSet, b: IntervalSet) -> IntervalSet:
    ops = {"meet": iset_meet, "join": iset_join, "diff": iset_diff, "symmdiff": iset_symmdiff}
    try:
        return ops[kind](a, b)
    except KeyError:
        raise ValueError(f"unknown interval-set operation {kind!r}") from None


def iset_make(raw: Iterable) -> IntervalSet:
    """Union of interval descriptors, in canonical form.

    Descriptors are ``(lo, hi)``, ``(lo, hi, lo_closed, hi_closed)``, dicts
    with those keys, or ``IntervalSet``/``Piece`` values.  Overlapping and
    adjacent pieces are merged.
    """
    out = EMPTY
    for d in raw:
        if isinstance(d, IntervalSet):
            part = d
        elif isinstance(d, Piece):
            part = IntervalSet((d,))
        elif isinstance(d, dict):
            part = interval(
                rat(d["lo"]),
                rat(d["hi"]),
                bool(d.get("lo_closed", True)),
                bool(d.get("hi_closed", True)),
            )
        else:
            seq = tuple(d)
            if len(seq) == 2:
                part = interval(seq[0], seq[1])
            elif len(seq) == 4:
                part = interval(seq[0], seq[1], bool(seq[2]), bool(seq[3]))
            else:
                raise ValueError(f"bad interval descriptor: {d!r}")
        out = iset_join(out, part)
    return out


def iset_from_json(doc: str | list) -> IntervalSet:
    if isinstance(doc, str):
        doc = json.loads(doc)
    return iset_make(doc)


def measure(a: IntervalSet) -> Fraction:
    """Total length: sum of hi - lo over pieces; boundary kinds are irrelevant."""
    return sum((p.width() for p in a.pieces), Fraction(0))


def probe_points(*sets: IntervalSet, offset: Fraction = Fraction(1, 1000)) -> list[Fraction]:
    """Membership-probe grid: every endpoint, endpoint +/- offset, piece midpoints."""
    out: set[Fraction] = set()
    for s in sets:
        for p in s.pieces:
            for e in (p.lo, p.hi):
                out.update((e, e - offset, e + offset))
            out.add((p.lo + p.hi) / 2)
    return sorted(out)
