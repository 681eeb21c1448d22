"""The algebraic half of Fubini: rectangle ring, product measure, 2-D step
functions, partial integration, and the exact double-integral identity.

A 2-D step function is stored on the full grid refinement of its rectangle
terms: one value per open cell, plus values on the measure-zero grid lines
and grid points so sections through a grid line stay exact.  Integrals
ignore the line and point values, mirroring the 1-D convention.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .instances import mu_S
from .intervals import IntervalSet, iset_from_json, iset_make
from .oag import rat
from .report import CheckReport
from .stepfn import StepFn, ZERO_FN, step_from_values
from .instances import phi_S

ZERO = Fraction(0)


def mu_XY(a: IntervalSet, b: IntervalSet) -> Fraction:
    """Product measure of the rectangle a x b."""
    return mu_S(a) * mu_S(b)


@dataclass(frozen=True)
class RectTerm:
    coefficient: Fraction
    base_x: IntervalSet
    base_y: IntervalSet

    def __post_init__(self):
        if self.base_x.is_empty() or self.base_y.is_empty():
            raise ValueError("rectangle terms need nonempty base sets")


def rect_term(coefficient, xs, ys) -> RectTerm:
    return RectTerm(rat(coefficient), iset_make(xs), iset_make(ys))


def _axis_atoms(points: Sequence[Fraction]) -> list[tuple[str, Fraction]]:
    """Alternating point and open-gap atoms along one axis."""
    atoms: list[tuple[str, Fraction]] = []
    for i, p in enumerate(points):
        atoms.append(("pt", p))
        if i + 1 < len(points):
            atoms.append(("open", (p + points[i + 1]) / 2))
    return atoms


@dataclass(frozen=True)
class StepFn2D:
    """Grid-canonical 2-D step function.

    ``xs``/``ys`` are the grid coordinates.  ``cells[i][j]`` is the value on
    the open cell, ``vlines[i][j]`` on {xs[i]} x (ys[j], ys[j+1]),
    ``hlines[i][j]`` on (xs[i], xs[i+1]) x {ys[j]}, ``points[i][j]`` at the
    grid point.  Zero outside the bounding box; the grid is minimal.
    """

    xs: tuple[Fraction, ...]
    ys: tuple[Fraction, ...]
    cells: tuple[tuple[Fraction, ...], ...]
    vlines: tuple[tuple[Fraction, ...], ...]
    hlines: tuple[tuple[Fraction, ...], ...]
    points: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        nx, ny = len(self.xs), len(self.ys)
        shapes = {
            "cells": (self.cells, max(0, nx - 1), max(0, ny - 1)),
            "vlines": (self.vlines, nx, max(0, ny - 1)),
            "hlines": (self.hlines, max(0, nx - 1), ny),
            "points": (self.points, nx, ny),
        }
        for name, (mat, rows, cols) in shapes.items():
            if len(mat) != rows or any(len(r) != cols for r in mat):
                raise ValueError(f"inconsistent {name} shape for a {nx}x{ny} grid")

    def __call__(self, x, y) -> Fraction:
        x, y = rat(x), rat(y)
        xs, ys = self.xs, self.ys
        if not xs or x < xs[0] or x > xs[-1] or y < ys[0] or y > ys[-1]:
            return ZERO
        from bisect import bisect_right

        i = bisect_right(xs, x) - 1
        j = bisect_right(ys, y) - 1
        on_x = xs[i] == x
        on_y = ys[j] == y
        if on_x and on_y:
            return self.points[i][j]
        if on_x:
            return self.vlines[i][j]
        if on_y:
            return self.hlines[i][j]
        return self.cells[i][j]

    def is_zero(self) -> bool:
        return not self.xs


ZERO_2D = StepFn2D((), (), (), (), (), ())


def _canonical_2d(xs, ys, cells, vlines, hlines, points) -> StepFn2D:
    xs, ys = list(xs), list(ys)
    cells = [list(r) for r in cells]
    vlines = [list(r) for r in vlines]
    hlines = [list(r) for r in hlines]
    points = [list(r) for r in points]

    def col_removable(i: int) -> bool:
        left = cells[i - 1] if i > 0 else [ZERO] * (len(ys) - 1)
        right = cells[i] if i < len(xs) - 1 else [ZERO] * (len(ys) - 1)
        hl_left = hlines[i - 1] if i > 0 else [ZERO] * len(ys)
        hl_right = hlines[i] if i < len(xs) - 1 else [ZERO] * len(ys)
        return vlines[i] == left == right and points[i] == hl_left == hl_right

    def drop_col(i: int) -> None:
        old_nx = len(xs)
        del xs[i], vlines[i], points[i]
        if old_nx >= 2:
            ic = i if i < old_nx - 1 else i - 1  # merged x-cell
            del cells[ic], hlines[ic]

    def row_removable(j: int) -> bool:
        below = [c[j - 1] for c in cells] if j > 0 else [ZERO] * (len(xs) - 1)
        above = [c[j] for c in cells] if j < len(ys) - 1 else [ZERO] * (len(xs) - 1)
        hline = [h[j] for h in hlines]
        vl_below = [v[j - 1] for v in vlines] if j > 0 else [ZERO] * len(xs)
        vl_above = [v[j] for v in vlines] if j < len(ys) - 1 else [ZERO] * len(xs)
        pts = [p[j] for p in points]
        return hline == below == above and pts == vl_below == vl_above

    def drop_row(j: int) -> None:
        old_ny = len(ys)
        del ys[j]
        for p in points:
            del p[j]
        for h in hlines:
            del h[j]
        if old_ny >= 2:
            jc = j if j < old_ny - 1 else j - 1  # merged y-cell
            for c in cells:
                del c[jc]
            for v in vlines:
                del v[jc]

    changed = True
    while changed and xs:
        changed = False
        for i in range(len(xs)):
            if col_removable(i):
                drop_col(i)
                changed = True
                break
        if changed:
            continue
        for j in range(len(ys)):
            if row_removable(j):
                drop_row(j)
                changed = True
                break

    if not xs or not ys:
        return ZERO_2D
    return StepFn2D(
        tuple(xs),
        tuple(ys),
        tuple(tuple(r) for r in cells),
        tuple(tuple(r) for r in vlines),
        tuple(tuple(r) for r in hlines),
        tuple(tuple(r) for r in points),
    )


def step2d_make(terms: Iterable[RectTerm]) -> StepFn2D:
    """Sum of coefficient times rectangle indicators, on the refined grid.

    Each term is rasterized onto the union grid of all base-set endpoints;
    overlaps add cell-wise and cancellations fall out of the canonical
    minimization.
    """
    terms = list(terms)
    if not terms:
        return ZERO_2D
    xs = sorted({e for t in terms for e in t.base_x.endpoints()})
    ys = sorted({e for t in terms for e in t.base_y.endpoints()})
    x_atoms = _axis_atoms(xs)
    y_atoms = _axis_atoms(ys)

    nx, ny = len(xs), len(ys)
    cells = [[ZERO] * (ny - 1) for _ in range(nx - 1)]
    vlines = [[ZERO] * (ny - 1) for _ in range(nx)]
    hlines = [[ZERO] * ny for _ in range(nx - 1)]
    points = [[ZERO] * ny for _ in range(nx)]

    for t in terms:
        in_x = [t.base_x.contains(coord) for _, coord in x_atoms]
        in_y = [t.base_y.contains(coord) for _, coord in y_atoms]
        for ai, xin in enumerate(in_x):
            if not xin:
                continue
            x_is_pt = ai % 2 == 0
            xi = ai // 2
            for aj, yin in enumerate(in_y):
                if not yin:
                    continue
                y_is_pt = aj % 2 == 0
                yj = aj // 2
                if x_is_pt and y_is_pt:
                    points[xi][yj] += t.coefficient
                elif x_is_pt:
                    vlines[xi][yj] += t.coefficient
                elif y_is_pt:
                    hlines[xi][yj] += t.coefficient
                else:
                    cells[xi][yj] += t.coefficient

    return _canonical_2d(xs, ys, cells, vlines, hlines, points)


def partial_integrate(f: StepFn2D) -> StepFn:
    """Integrate out x: a 1-D step function of y, exact.

    On each open y-strip the section in x is a step function with the cell
    values; on each grid line it has the horizontal-line values.  Point and
    vertical-line values carry no x-measure and drop out.
    """
    if f.is_zero():
        return ZERO_FN
    widths = [f.xs[i + 1] - f.xs[i] for i in range(len(f.xs) - 1)]
    ovals = [
        sum((f.cells[i][j] * widths[i] for i in range(len(widths))), ZERO)
        for j in range(len(f.ys) - 1)
    ]
    pvals = [
        sum((f.hlines[i][j] * widths[i] for i in range(len(widths))), ZERO)
        for j in range(len(f.ys))
    ]
    return step_from_values(f.ys, ovals, pvals)


def slice_at(f: StepFn2D, y) -> StepFn:
    """The exact section x -> f(x, y)."""
    y = rat(y)
    if f.is_zero() or y < f.ys[0] or y > f.ys[-1]:
        return ZERO_FN
    from bisect import bisect_right

    j = bisect_right(f.ys, y) - 1
    if f.ys[j] == y:
        ovals = [f.hlines[i][j] for i in range(len(f.xs) - 1)]
        pvals = [f.points[i][j] for i in range(len(f.xs))]
    else:
        ovals = [f.cells[i][j] for i in range(len(f.xs) - 1)]
        pvals = [f.vlines[i][j] for i in range(len(f.xs))]
    return step_from_values(f.xs, ovals, pvals)


def double_integral(f: StepFn2D) -> Fraction:
    """Direct cell sum: coefficient times area, lines and points ignored."""
    total = ZERO
    for i in range(len(f.xs) - 1):
        w = f.xs[i + 1] - f.xs[i]
        for j in range(len(f.ys) - 1):
            total += f.cells[i][j] * w * (f.ys[j + 1] - f.ys[j])
    return total


def sample_ys(f: StepFn2D, rng: random.Random, count: int) -> list[Fraction]:
    """Sampling grid for slice checks: gridlines, strip midpoints, outside."""
    cands: list[Fraction] = []
    if not f.is_zero():
        cands.extend(f.ys)
        cands.extend((f.ys[j] + f.ys[j + 1]) / 2 for j in range(len(f.ys) - 1))
        cands.append(f.ys[0] - 1)
        cands.append(f.ys[-1] + 1)
    else:
        cands.append(ZERO)
    while len(cands) < count:
        cands.append(Fraction(rng.randint(-40, 40), rng.randint(1, 8)))
    rng.shuffle(cands)
    return cands[:count]


def fubini_check(f: StepFn2D, sampled_y: Iterable | None = None) -> CheckReport:
    """phi_Y(F_X(f)) against the direct double integral, plus slice checks.

    Exact rational equality is asserted for the double integral identity in
    both integration orders, and F_X(f)(y) = phi_X(slice(f, y)) is verified
    at every sampled y (gridlines included).  Failures are reported, not
    raised.
    """
    report = CheckReport()
    fx = partial_integrate(f)
    lhs = phi_S(fx)
    rhs = double_integral(f)
    report.record("phi_Y o F_X = mu_XY", lhs == rhs, f"lhs={lhs} rhs={rhs}")

    ft = transpose(f)
    fy = partial_integrate(ft)
    report.record(
        "y-first order agrees", phi_S(fy) == rhs, f"lhs={phi_S(fy)} rhs={rhs}"
    )

    for y in sampled_y or ():
        y = rat(y)
        report.record(
            "F_X(f)(y) = phi_X(slice)",
            fx(y) == phi_S(slice_at(f, y)),
            f"y={y} fx={fx(y)} slice-integral={phi_S(slice_at(f, y))}",
        )
    return report


def transpose(f: StepFn2D) -> StepFn2D:
    if f.is_zero():
        return ZERO_2D
    nx, ny = len(f.xs), len(f.ys)

    def t(mat, rows, cols):
        return tuple(tuple(mat[r][c] for r in range(rows)) for c in range(cols))

    return StepFn2D(
        f.ys,
        f.xs,
        t(f.cells, nx - 1, ny - 1),
        t(f.hlines, nx - 1, ny),
        t(f.vlines, nx, ny - 1),
        t(f.points, nx, ny),
    )


def rectset_measure(rects: Sequence[tuple[IntervalSet, IntervalSet]]) -> Fraction:
    """Measure of a finite union of rectangles by open-cell decomposition.

    Grid lines have measure zero, so membership of each open cell (tested
    at its midpoint pair) decides the whole measure exactly.
    """
    if not rects:
        return ZERO
    xs = sorted({e for a, _ in rects for e in a.endpoints()})
    ys = sorted({e for _, b in rects for e in b.endpoints()})
    total = ZERO
    for i in range(len(xs) - 1):
        mx = (xs[i] + xs[i + 1]) / 2
        w = xs[i + 1] - xs[i]
        for j in range(len(ys) - 1):
            my = (ys[j] + ys[j + 1]) / 2
            if any(a.contains(mx) and b.contains(my) for a, b in rects):
                total += w * (ys[j + 1] - ys[j])
    return total


def terms_from_json(doc: str | list) -> list[RectTerm]:
    """Load ``[{"coefficient": "2", "base_x": [...], "base_y": [...]}, ...]``."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    return [
        RectTerm(rat(t["coefficient"]), iset_from_json(t["base_x"]), iset_from_json(t["base_y"]))
        for t in doc
    ]


def sample_step2d(
    rng: random.Random, max_terms: int = 10, max_breaks_per_axis: int = 16
) -> StepFn2D:
    from .instances import sample_interval_set

    terms = []
    for _ in range(rng.randint(1, max_terms)):
        a = sample_interval_set(rng, max_pieces=2)
        b = sample_interval_set(rng, max_pieces=2)
        if a.is_empty() or b.is_empty():
            continue
        terms.append(RectTerm(Fraction(rng.randint(-4, 4)), a, b))
    while True:
        f = step2d_make(terms)
        if len(f.xs) <= max_breaks_per_axis and len(f.ys) <= max_breaks_per_axis:
            return f
        terms = terms[:-1]
