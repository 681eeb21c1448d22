"""Step functions against a pointwise probe oracle."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latval.stepfn import (
    ConflictingAssignment,
    ZERO_FN,
    indicator,
    integral,
    step_abs,
    step_add,
    step_combine,
    step_from_json,
    step_from_values,
    step_join,
    step_leq,
    step_make,
    step_meet,
    step_probe_points,
    step_scale,
    step_sub,
)

POINTWISE = {
    "add": lambda x, y: x + y,
    "sub": lambda x, y: x - y,
    "meet": min,
    "join": max,
}


def assert_pointwise(kind, f, g):
    out = step_combine(kind, f, g)
    for x in step_probe_points(f, g, out):
        assert out(x) == POINTWISE[kind](f(x), g(x)), f"{kind} wrong at {x}"
    return out


rationals = st.integers(-20, 20).flatmap(
    lambda num: st.integers(1, 6).map(lambda den: Fraction(num, den))
)


@st.composite
def step_fns(draw):
    bps = sorted(draw(st.sets(rationals, min_size=0, max_size=5)))
    if not bps:
        return ZERO_FN
    ovals = [Fraction(draw(st.integers(-4, 4))) for _ in range(len(bps) - 1)]
    pvals = [Fraction(draw(st.integers(-4, 4))) for _ in range(len(bps))]
    return step_from_values(bps, ovals, pvals)


def test_make_examples():
    f = step_make([((0, 1, False, False), 2), ((1, 2, False, False), 3)])
    assert f.breakpoints == (0, 1, 2)
    assert integral(f) == 5

    g = indicator(0, 1)
    assert g.breakpoints == (0, 1)
    assert g(0) == 1 and g(1) == 1 and g(Fraction(1, 2)) == 1
    assert integral(g) == 1

    assert step_make([]) == ZERO_FN
    assert step_make([((0, 1), 0)]) == ZERO_FN


def test_point_values_do_not_contribute():
    f = step_make([], points=[(5, 7)])
    assert f(5) == 7 and integral(f) == 0


def test_conflicting_assignment_raises():
    with pytest.raises(ConflictingAssignment):
        step_make([((0, 2), 1), ((1, 3), 2)])
    with pytest.raises(ConflictingAssignment):
        step_make([((0, 1), 1)], points=[(Fraction(1, 2), 5)])
    # agreeing overlap is fine
    f = step_make([((0, 2), 1), ((1, 3), 1)])
    assert f == indicator(0, 3)


def test_group_inverse():
    f = step_make([((0, 1, False, False), 2), ((1, 2, False, False), 3)])
    assert step_add(f, step_scale(-1, f)) == ZERO_FN


def test_abs_sub_example():
    # |1_[0,1] - 1_[1,2]|: 1 away from the overlap point, 0 at it
    out = step_abs(step_sub(indicator(0, 1), indicator(1, 2)))
    assert out(0) == 1 and out(2) == 1 and out(1) == 0
    assert out(Fraction(1, 2)) == 1 and out(Fraction(3, 2)) == 1
    assert integral(out) == 2


def test_meet_example():
    out = step_meet(indicator(0, 2), step_scale(2, indicator(1, 3)))
    assert out == indicator(1, 2)


def test_canonical_removes_redundant_breakpoints():
    f = step_from_values([0, 1, 2], [1, 1], [1, 1, 1])
    assert f.breakpoints == (0, 2)
    assert f == indicator(0, 2)


def test_scale_by_zero():
    assert step_scale(0, indicator(0, 5)) == ZERO_FN


def test_leq_is_pointwise():
    assert step_leq(indicator(0, 1), indicator(0, 2))
    assert not step_leq(indicator(0, 2), indicator(0, 1))
    bump = step_make([], points=[(Fraction(1, 2), -1)])
    assert step_leq(bump, ZERO_FN) and not step_leq(ZERO_FN, bump)


def test_json_roundtrip():
    f = step_make([((0, 1), 2)], points=[(3, 4)])
    assert step_from_json(f.to_json()) == f


@settings(max_examples=250, deadline=None)
@given(step_fns(), step_fns(), st.sampled_from(sorted(POINTWISE)))
def test_combine_matches_pointwise_oracle(f, g, kind):
    assert_pointwise(kind, f, g)


@settings(max_examples=200, deadline=None)
@given(step_fns(), step_fns())
def test_riesz_identities(f, g):
    assert step_add(step_meet(f, g), step_join(f, g)) == step_add(f, g)
    assert integral(step_add(f, g)) == integral(f) + integral(g)
    assert step_sub(step_join(f, g), step_meet(f, g)) == step_abs(step_sub(f, g))


@settings(max_examples=150, deadline=None)
@given(step_fns(), st.integers(-5, 5))
def test_scale_linearity(f, lam):
    assert integral(step_scale(lam, f)) == lam * integral(f)


@settings(max_examples=150, deadline=None)
@given(step_fns())
def test_canonical_form_is_minimal(f):
    # no removable breakpoint: some value must change at each one
    for i, s in enumerate(f.breakpoints):
        left = f.open_values[i - 1] if i > 0 else Fraction(0)
        right = f.open_values[i] if i < len(f.breakpoints) - 1 else Fraction(0)
        assert not (left == f.point_values[i] == right)


def test_randomized_against_oracle_seeded():
    from latval.instances import sample_step_fn

    rng = random.Random(99)
    for _ in range(300):
        f, g = sample_step_fn(rng), sample_step_fn(rng)
        for kind in POINTWISE:
            assert_pointwise(kind, f, g)
