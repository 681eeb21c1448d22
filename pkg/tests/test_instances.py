import math
import random
from fractions import Fraction

import pytest

from latval.instances import (
    counting_valuation,
    dimension_valuation,
    interval_measure,
    mu_S,
    phi_S,
    sample_interval_set,
    sample_step_fn,
    step_integral,
    totient,
    totient_valuation,
)
from latval.intervals import EMPTY, interval, iset_join, iset_meet, singleton
from latval.stepfn import indicator, step_make
from latval.valuation import check_valuation


def totient_oracle(n: int) -> int:
    return sum(1 for x in range(1, n + 1) if math.gcd(x, n) == 1)


def test_totient_examples():
    assert totient(12) == 4 == totient_oracle(12)
    assert totient(1) == 1
    for p in (2, 3, 5, 7, 11, 13, 541):
        assert totient(p) == p - 1
    with pytest.raises(ValueError):
        totient(0)


def test_totient_matches_coprime_count_oracle():
    for n in range(1, 301):
        assert totient(n) == totient_oracle(n)
    # beyond the sieve cache: trial division path
    assert totient(5000) == totient_oracle(5000)
    assert totient(4097) == totient_oracle(4097)


def test_totient_modular_identity_full_range():
    from latval.instances import totient_range

    tot = totient_range(250000)  # lcm reaches 500 * 499
    for m in range(1, 501):
        for n in range(1, 501):
            g = math.gcd(m, n)
            assert tot[g] * tot[m * n // g] == tot[m] * tot[n]


def test_mu_additive_on_disjoint_samples():
    rng = random.Random(5)
    for _ in range(300):
        a, b = sample_interval_set(rng), sample_interval_set(rng)
        if iset_meet(a, b) == EMPTY:
            assert mu_S(iset_join(a, b)) == mu_S(a) + mu_S(b)
        assert mu_S(iset_meet(a, b)) + mu_S(iset_join(a, b)) == mu_S(a) + mu_S(b)


def test_phi_linear_and_positive():
    from latval.stepfn import step_add, step_leq, step_scale, ZERO_FN

    rng = random.Random(6)
    for _ in range(300):
        f, g = sample_step_fn(rng), sample_step_fn(rng)
        lam = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        assert phi_S(step_add(f, g)) == phi_S(f) + phi_S(g)
        assert phi_S(step_scale(lam, f)) == lam * phi_S(f)
        if step_leq(ZERO_FN, f):
            assert phi_S(f) >= 0


def test_builtin_valuations_pass_check():
    for phi in (
        interval_measure,
        step_integral,
        counting_valuation(),
        totient_valuation(),
        dimension_valuation(),
    ):
        report = check_valuation(phi, samples=400, seed=13)
        assert report.ok, (phi.name, report.failing())


def test_measure_ignores_boundary_kinds():
    assert mu_S(interval(0, 1, False, False)) == 1 == mu_S(interval(0, 1))
    assert mu_S(singleton(3)) == 0


def test_phi_ignores_point_values():
    f = indicator(0, 1)
    g = step_make([((0, 1, False, False), 1)])
    assert phi_S(f) == phi_S(g) == 1
