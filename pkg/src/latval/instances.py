"""The concrete valuations: interval measure, step integral, counting,
Euler's totient on the divisibility lattice, GF(2) subspace dimension."""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

from . import gf2, intervals, stepfn
from .gf2 import GF2Subspace
from .intervals import IntervalSet
from .lattice import DivisibilityLattice, FiniteSubsetLattice, ForeignElement, Lattice
from .oag import DIV_POS, RATIONALS, DivPos
from .stepfn import StepFn
from .valuation import Valuation


class IntervalSetLattice(Lattice):
    """Rational-endpoint interval sets under inclusion."""

    name = "interval-sets"

    def _check(self, a) -> None:
        if not isinstance(a, IntervalSet):
            raise ForeignElement(f"{a!r} is not an IntervalSet")

    def meet(self, a, b):
        self._check(a), self._check(b)
        return intervals.iset_meet(a, b)

    def join(self, a, b):
        self._check(a), self._check(b)
        return intervals.iset_join(a, b)

    def leq(self, a, b) -> bool:
        self._check(a), self._check(b)
        return intervals.iset_diff(a, b).is_empty()

    def contains_point(self, a: IntervalSet, x) -> bool:
        return a.contains(x)


class StepFnLattice(Lattice):
    """Step functions under the pointwise order."""

    name = "step-functions"

    def _check(self, a) -> None:
        if not isinstance(a, StepFn):
            raise ForeignElement(f"{a!r} is not a StepFn")

    def meet(self, a, b):
        self._check(a), self._check(b)
        return stepfn.step_meet(a, b)

    def join(self, a, b):
        self._check(a), self._check(b)
        return stepfn.step_join(a, b)

    def leq(self, a, b) -> bool:
        self._check(a), self._check(b)
        return stepfn.step_leq(a, b)


class GF2SubspaceLattice(Lattice):
    """Subspaces of GF(2)^n under inclusion."""

    name = "gf2-subspaces"

    def __init__(self, ambient: int):
        self.ambient = ambient

    def _check(self, a) -> None:
        if not isinstance(a, GF2Subspace) or a.ambient != self.ambient:
            raise ForeignElement(f"{a!r} is not a subspace of GF(2)^{self.ambient}")

    def meet(self, a, b):
        self._check(a), self._check(b)
        return gf2.gf2_meet(a, b)

    def join(self, a, b):
        self._check(a), self._check(b)
        return gf2.gf2_join(a, b)

    def leq(self, a, b) -> bool:
        self._check(a), self._check(b)
        return gf2.gf2_leq(a, b)


INTERVAL_SETS = IntervalSetLattice()
STEP_FNS = StepFnLattice()


def sample_rational(
    rng: random.Random, lo: int = -8, hi: int = 8, max_den: int = 6
) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * den, hi * den), den)


def sample_interval_set(rng: random.Random, max_pieces: int = 3) -> IntervalSet:
    n = rng.randint(0, max_pieces)
    descs = []
    for _ in range(n):
        a, b = sample_rational(rng), sample_rational(rng)
        if a > b:
            a, b = b, a
        descs.append((a, b, rng.random() < 0.5, rng.random() < 0.5))
    if rng.random() < 0.3:
        descs.append((x := sample_rational(rng), x, True, True))
    return intervals.iset_make(descs)


def sample_step_fn(
    rng: random.Random, max_breaks: int = 5, value_lo: int = -4, value_hi: int = 4
) -> StepFn:
    k = rng.randint(0, max_breaks)
    bps = sorted({sample_rational(rng) for _ in range(k)})
    if not bps:
        return stepfn.ZERO_FN
    ovals = [Fraction(rng.randint(value_lo, value_hi)) for _ in range(len(bps) - 1)]
    pvals = [Fraction(rng.randint(value_lo, value_hi)) for _ in range(len(bps))]
    return stepfn.step_from_values(bps, ovals, pvals)


def mu_S(a: IntervalSet) -> Fraction:
    """The pre-Lebesgue measure: total piece length."""
    return intervals.measure(a)


def phi_S(f: StepFn) -> Fraction:
    """The step integral: open values times widths."""
    return stepfn.integral(f)


interval_measure = Valuation(
    domain=INTERVAL_SETS,
    group=RATIONALS,
    fn=mu_S,
    name="mu_S",
    sampler=sample_interval_set,
)

step_integral = Valuation(
    domain=STEP_FNS,
    group=RATIONALS,
    fn=phi_S,
    name="phi_S",
    sampler=sample_step_fn,
)


def counting_valuation(ground_size: int = 20) -> Valuation:
    ground = range(1, ground_size + 1)

    def sample(rng: random.Random):
        return frozenset(x for x in ground if rng.random() < 0.35)

    return Valuation(
        domain=FiniteSubsetLattice(ground),
        group=RATIONALS,
        fn=lambda a: Fraction(len(a)),
        name="counting",
        sampler=sample,
    )


@lru_cache(maxsize=None)
def _totient_table(limit: int) -> tuple[int, ...]:
    phi = list(range(limit + 1))
    for p in range(2, limit + 1):
        if phi[p] == p:  # p prime
            for m in range(p, limit + 1, p):
                phi[m] -= phi[m] // p
    return tuple(phi)


def totient_range(limit: int) -> tuple[int, ...]:
    """totient(0..limit) in one sieve; index 0 is a placeholder."""
    return _totient_table(limit)


def totient(n: int) -> int:
    """Euler's totient, via a factorization sieve."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"totient needs a positive integer, got {n!r}")
    if n <= 4096:
        return _totient_table(4096)[n]
    result = n
    d, m = 2, n
    while d * d <= m:
        if m % d == 0:
            result -= result // d
            while m % d == 0:
                m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        result -= result // m
    return result


def totient_valuation(limit: int = 500) -> Valuation:
    """n -> totient(n) as a map from divisibility order into the
    multiplicative positive rationals; modularity there reads
    phi(gcd) * phi(lcm) = phi(m) * phi(n)."""
    return Valuation(
        domain=DivisibilityLattice(limit=None),
        group=DIV_POS,
        fn=lambda n: DivPos.from_int(totient(n)),
        name="totient",
        sampler=lambda rng: rng.randint(1, limit),
    )


def dimension_valuation(ambient: int = 8) -> Valuation:
    def sample(rng: random.Random):
        k = rng.randint(0, ambient)
        vecs = [rng.randint(0, (1 << ambient) - 1) for _ in range(k)]
        return GF2Subspace.from_vectors(ambient, vecs)

    return Valuation(
        domain=GF2SubspaceLattice(ambient),
        group=RATIONALS,
        fn=lambda u: Fraction(u.dim),
        name=f"dim@GF(2)^{ambient}",
        sampler=sample,
    )


def pad_with_nulls(rng: random.Random, a: IntervalSet) -> IntervalSet:
    """Adjoin a few zero-measure singletons: an approx-equal representative."""
    out = a
    for _ in range(rng.randint(1, 3)):
        out = intervals.iset_join(out, intervals.singleton(sample_rational(rng)))
    return out


def pad_step_at_points(rng: random.Random, f: StepFn) -> StepFn:
    """Perturb point values only: equal almost everywhere, so approx-equal."""
    pts = [(sample_rational(rng), Fraction(rng.randint(-3, 3)))]
    bumps = stepfn.step_make([], pts)
    return stepfn.step_add(f, bumps)
