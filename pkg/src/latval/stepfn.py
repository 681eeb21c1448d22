"""Exact step functions on the line.

A ``StepFn`` is constant on the open intervals between consecutive
breakpoints, carries an explicit value at every breakpoint, and is zero
outside the breakpoint span.  Point values do not contribute to the
integral, but the lattice order is pointwise, so they are stored and kept
canonical: a breakpoint survives only if the function actually changes
there (value on the left, at the point, and on the right not all equal).

Binary operations are computed on the common breakpoint refinement and
re-canonicalized.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .intervals import IntervalSet
from .oag import rat

ZERO = Fraction(0)


@dataclass(frozen=True)
class StepFn:
    breakpoints: tuple[Fraction, ...]
    open_values: tuple[Fraction, ...]  # value on (s_i, s_{i+1})
    point_values: tuple[Fraction, ...]  # value at s_i

    def __post_init__(self):
        n = len(self.breakpoints)
        if len(self.open_values) != max(0, n - 1) or len(self.point_values) != n:
            raise ValueError("inconsistent breakpoint/value lengths")
        if any(
            self.breakpoints[i] >= self.breakpoints[i + 1] for i in range(n - 1)
        ):
            raise ValueError("breakpoints must be strictly increasing")

    def __call__(self, x) -> Fraction:
        x = rat(x)
        bps = self.breakpoints
        if not bps or x < bps[0] or x > bps[-1]:
            return ZERO
        i = bisect_right(bps, x) - 1
        if bps[i] == x:
            return self.point_values[i]
        return self.open_values[i]

    def is_zero(self) -> bool:
        return not self.breakpoints

    def __str__(self) -> str:
        if not self.breakpoints:
            return "0"
        parts = []
        for i, s in enumerate(self.breakpoints):
            parts.append(f"{self.point_values[i]}@{{{s}}}")
            if i + 1 < len(self.breakpoints):
                parts.append(
                    f"{self.open_values[i]}@({s},{self.breakpoints[i + 1]})"
                )
        return " ".join(parts)

    def to_json_obj(self) -> dict:
        return {
            "breakpoints": [str(s) for s in self.breakpoints],
            "open_values": [str(v) for v in self.open_values],
            "point_values": [str(v) for v in self.point_values],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


ZERO_FN = StepFn((), (), ())


def _canonical(
    bps: Sequence[Fraction], ovals: Sequence[Fraction], pvals: Sequence[Fraction]
) -> StepFn:
    bps, ovals, pvals = list(bps), list(ovals), list(pvals)
    changed = True
    while changed:
        changed = False
        for i in range(len(bps)):
            left = ovals[i - 1] if i > 0 else ZERO
            right = ovals[i] if i < len(bps) - 1 else ZERO
            if left == pvals[i] == right:
                del bps[i], pvals[i]
                if i < len(ovals):
                    del ovals[i]
                elif ovals:
                    del ovals[i - 1]
                changed = True
                break
    return StepFn(tuple(bps), tuple(ovals), tuple(pvals))


def step_from_values(
    bps: Sequence[Fraction], ovals: Sequence[Fraction], pvals: Sequence[Fraction]
) -> StepFn:
    return _canonical([rat(s) for s in bps], [rat(v) for v in ovals], [rat(v) for v in pvals])


class ConflictingAssignment(ValueError):
    pass


def step_make(parts: Iterable, points: Iterable = ()) -> StepFn:
    """Build a step function from a piecewise description.

    ``parts`` are ``(interval descriptor, value)`` entries, each descriptor as
    accepted by :func:`latval.intervals.iset_make` (single interval); ``points``
    are extra ``(x, value)`` assignments.  Regions assigned two different
    values raise :class:`ConflictingAssignment`; unassigned regions are zero.
    """
    from .intervals import iset_make

    regions: list[tuple[IntervalSet, Fraction]] = []
    for desc, value in parts:
        regions.append((iset_make([desc]), rat(value)))
    point_vals: list[tuple[Fraction, Fraction]] = [(rat(x), rat(v)) for x, v in points]

    coords: set[Fraction] = set()
    for region, _ in regions:
        coords.update(region.endpoints())
    coords.update(x for x, _ in point_vals)
    bps = sorted(coords)
    if not bps:
        return ZERO_FN

    def described_value(x: Fraction, at_point: bool) -> Fraction:
        found: Fraction | None = None
        for region, value in regions:
            if region.contains(x):
                if found is not None and found != value:
                    raise ConflictingAssignment(
                        f"conflicting values {found} and {value} at {x}"
                    )
                found = value
        if at_point:
            for x0, value in point_vals:
                if x0 == x:
                    if found is not None and found != value:
                        raise ConflictingAssignment(
                            f"conflicting values {found} and {value} at point {x}"
                        )
                    found = value
        return found if found is not None else ZERO

    pvals = [described_value(s, at_point=True) for s in bps]
    ovals = [
        described_value((bps[i] + bps[i + 1]) / 2, at_point=False)
        for i in range(len(bps) - 1)
    ]
    return _canonical(bps, ovals, pvals)


def indicator(lo, hi, lo_closed: bool = True, hi_closed: bool = True, value=1) -> StepFn:
    return step_make([((lo, hi, lo_closed, hi_closed), value)])


def _pointwise(f: StepFn, g: StepFn, combine) -> StepFn:
    bps = sorted(set(f.breakpoints) | set(g.breakpoints))
    if not bps:
        return ZERO_FN
    pvals = [combine(f(s), g(s)) for s in bps]
    ovals = [
        combine(f((bps[i] + bps[i + 1]) / 2), g((bps[i] + bps[i + 1]) / 2))
        for i in range(len(bps) - 1)
    ]
    return _canonical(bps, ovals, pvals)


def step_add(f: StepFn, g: StepFn) -> StepFn:
    return _pointwise(f, g, lambda x, y: x + y)


def step_sub(f: StepFn, g: StepFn) -> StepFn:
    return _pointwise(f, g, lambda x, y: x - y)


def step_meet(f: StepFn, g: StepFn) -> StepFn:
    return _pointwise(f, g, min)


def step_join(f: StepFn, g: StepFn) -> StepFn:
    return _pointwise(f, g, max)


def step_scale(lam, f: StepFn) -> StepFn:
    lam = rat(lam)
    if lam == 0 or f.is_zero():
        return ZERO_FN
    return StepFn(
        f.breakpoints,
        tuple(lam * v for v in f.open_values),
        tuple(lam * v for v in f.point_values),
    )


def step_abs(f: StepFn) -> StepFn:
    return _canonical(
        f.breakpoints, [abs(v) for v in f.open_values], [abs(v) for v in f.point_values]
    )


def step_combine(kind: str, f: StepFn, g: StepFn | None = None, lam=None) -> StepFn:
    if kind == "scale":
        return step_scale(lam, f)
    if kind == "abs":
        return step_abs(f)
    if g is None:
        raise ValueError(f"operation {kind!r} needs two step functions")
    ops = {"meet": step_meet, "join": step_join, "add": step_add, "sub": step_sub}
    try:
        return ops[kind](f, g)
    except KeyError:
        raise ValueError(f"unknown step operation {kind!r}") from None


def step_leq(f: StepFn, g: StepFn) -> bool:
    """Pointwise order, decided on the common refinement."""
    bps = sorted(set(f.breakpoints) | set(g.breakpoints))
    for i, s in enumerate(bps):
        if f(s) > g(s):
            return False
        if i + 1 < len(bps):
            mid = (s + bps[i + 1]) / 2
            if f(mid) > g(mid):
                return False
    return True


def integral(f: StepFn) -> Fraction:
    """Sum of open-interval value times width; point values are ignored."""
    total = ZERO
    for i in range(len(f.open_values)):
        total += f.open_values[i] * (f.breakpoints[i + 1] - f.breakpoints[i])
    return total


def step_from_json(doc: str | dict) -> StepFn:
    if isinstance(doc, str):
        doc = json.loads(doc)
    return step_from_values(doc["breakpoints"], doc["open_values"], doc["point_values"])


def step_probe_points(*fns: StepFn, offset: Fraction = Fraction(1, 1000)) -> list[Fraction]:
    out: set[Fraction] = set()
    for f in fns:
        for s in f.breakpoints:
            out.update((s, s - offset, s + offset))
        for i in range(len(f.breakpoints) - 1):
            out.add((f.breakpoints[i] + f.breakpoints[i + 1]) / 2)
    return sorted(out)
