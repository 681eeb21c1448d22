"""Fitting uniformities and constructive dense approximation.

The canonical instance is dyadic: relation i holds between s and t exactly
when s <= t <= s + 2^-i.  Indices are natural numbers with meet = max and
halving = successor, so all tolerance arithmetic is exact powers of two.

``dense_approximate`` runs the constructive content of the lower-density
lemma: pull a witness below every stage at a geometrically tightening
tolerance schedule, take running meets, and certify at each stage that the
accumulated loss telescopes below the requested tolerance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable

from .intervals import EMPTY, IntervalSet, interval, iset_join
from .oag import RATIONALS, Group, rat
from .report import CheckReport
from .sequences import MonoSeq
from .valuation import Valuation, dist


def dyadic_holds(i: int, s, t) -> bool:
    """s <= t <= s + 2^-i, exactly."""
    if i < 1:
        raise ValueError("uniformity indices start at 1")
    s, t = rat(s), rat(t)
    return s <= t <= s + Fraction(1, 2**i)


@dataclass(frozen=True)
class FittingUniformity:
    """An indexed countable family of binary relations on an ordered group."""

    group: Group
    holds: Callable[[int, Any, Any], bool]
    meet_index: Callable[[int, int], int]
    half_index: Callable[[int], int]
    name: str = "uniformity"


DYADIC = FittingUniformity(
    group=RATIONALS,
    holds=dyadic_holds,
    meet_index=max,
    half_index=lambda i: i + 1,
    name="dyadic",
)


def broken_half_uniformity() -> FittingUniformity:
    """Negative control: halving that does not halve; fails composition."""
    return FittingUniformity(
        group=RATIONALS,
        holds=dyadic_holds,
        meet_index=max,
        half_index=lambda i: i,
        name="dyadic-broken-half",
    )


def separation_index(u: FittingUniformity, s, t, limit: int = 64) -> int | None:
    """Smallest index <= limit whose relation separates s < t, if any."""
    for i in range(1, limit + 1):
        if not u.holds(i, s, t):
            return i
    return None


def uniformity_check(
    u: FittingUniformity,
    samples: int,
    seed: int,
    depth: int = 12,
    modulus_sequences: Iterable[tuple[Callable[[int], Any], Callable[[int], int], Any]] = (),
) -> CheckReport:
    """Sampled checks of the uniformity laws.

    Covers reflexivity, the meet-index implication, halving composition
    (on dyadic-grid increments, including the boundary step of the half
    index), the order sandwich, separation of sampled strict pairs within
    64 indices, translation invariance, and order reversal under negation.
    The two limit laws quantify over infinite data, so they are exercised
    only against caller-supplied ``(producer, modulus, limit)`` triples of
    decreasing sequences.
    """
    g = u.group
    rng = random.Random(seed)
    report = CheckReport()

    def sample_elem():
        return g.sample(rng)

    def dyadic_increment(i: int) -> Any:
        # an increment the half relation certainly tolerates, plus smaller ones
        k = rng.choice([0, 1, 2])
        return Fraction(1, 2 ** (i + k))

    for _ in range(samples):
        s = sample_elem()
        i = rng.randint(1, depth)
        j = rng.randint(1, depth)
        # half the samples sit within the index-i tolerance so the guarded
        # implications below are exercised non-vacuously
        if rng.random() < 0.5:
            t = g.add(s, dyadic_increment(max(i, j)))
        else:
            t = sample_elem()
        r = sample_elem()
        wit = f"i={i} j={j} s={g.fmt(s)} t={g.fmt(t)} r={g.fmt(r)}"

        report.record("(i) reflexive", u.holds(i, s, s), wit)

        k = u.meet_index(i, j)
        if u.holds(k, s, t):
            report.record(
                "(ii) meet index implies both", u.holds(i, s, t) and u.holds(j, s, t), wit
            )
        else:
            report.record("(ii) meet index implies both", True, wit)

        h = u.half_index(i)
        step1, step2 = dyadic_increment(h), dyadic_increment(h)
        mid, far = g.add(s, step1), g.add(s, g.add(step1, step2))
        if u.holds(h, s, mid) and u.holds(h, mid, far):
            report.record(
                "(iii) halving composes",
                u.holds(i, s, far),
                f"i={i} half={h} r={g.fmt(s)} s={g.fmt(mid)} t={g.fmt(far)}",
            )
        else:
            report.record("(iii) halving composes", True, wit)

        lo, hi = (s, t) if g.leq(s, t) else (t, s)
        if isinstance(lo, Fraction) and isinstance(hi, Fraction):
            midpoint = (lo + hi) / 2
        else:
            midpoint = lo
        if u.holds(i, lo, hi):
            report.record(
                "(iv) order sandwich",
                u.holds(i, lo, midpoint) and u.holds(i, midpoint, hi),
                wit,
            )
        else:
            report.record("(iv) order sandwich", True, wit)

        if not g.equal(lo, hi):
            sep = separation_index(u, lo, hi)
            report.record(
                "(v) separation within 64 indices",
                sep is not None,
                f"s={g.fmt(lo)} t={g.fmt(hi)}",
            )

        if u.holds(i, s, t):
            report.record(
                "(viii) translation invariant",
                u.holds(i, g.add(r, s), g.add(r, t)),
                wit,
            )
            report.record(
                "(ix) negation reverses", u.holds(i, g.neg(t), g.neg(s)), wit
            )
        else:
            report.record("(viii) translation invariant", True, wit)
            report.record("(ix) negation reverses", True, wit)

    for producer, modulus, limit in modulus_sequences:
        # (vi): a decreasing sequence with infimum comes arbitrarily close
        for i in range(1, depth + 1):
            n = modulus(i)
            report.record(
                "(vi) modulus stage close to infimum",
                u.holds(i, limit, producer(n)),
                f"i={i} stage={n}",
            )
        # (vii): the modulus makes the tail self-close, the finite shadow of
        # the bounded-infimum law
        for i in range(1, depth + 1):
            n = modulus(i)
            for m in range(n, n + 4):
                report.record(
                    "(vii) tail self-close at modulus stage",
                    u.holds(i, producer(m), producer(n)),
                    f"i={i} stages {n},{m}",
                )
    return report


@dataclass(frozen=True)
class DenseOracle:
    """Produces sublattice witnesses below a given element at a tolerance index."""

    name: str
    witness: Callable[[Any, int], Any]
    member: Callable[[Any], bool]  # membership in the declared sublattice


def _floor_scaled(x: Fraction, k: int) -> Fraction:
    scaled = x * 2**k
    return Fraction(scaled.numerator // scaled.denominator, 2**k)


def _ceil_scaled(x: Fraction, k: int) -> Fraction:
    scaled = x * 2**k
    return Fraction(-((-scaled.numerator) // scaled.denominator), 2**k)


def is_dyadic_set(a: IntervalSet) -> bool:
    return all(
        e.denominator & (e.denominator - 1) == 0
        for p in a.pieces
        for e in (p.lo, p.hi)
    )


def dyadic_endpoint_oracle() -> DenseOracle:
    """Shrink each piece inward to the dyadic grid fine enough for the index.

    The returned set is contained in the input and loses at most 2^-i of
    measure in total (two grid steps per piece, pieces that collapse lose
    less than their two steps).
    """

    def witness(a: IntervalSet, i: int) -> IntervalSet:
        if not a.pieces:
            return EMPTY
        npieces = len(a.pieces)
        k = i + 1
        while 2 * npieces * Fraction(1, 2**k) > Fraction(1, 2**i):
            k += 1
        out = EMPTY
        for p in a.pieces:
            lo = _ceil_scaled(p.lo, k)
            hi = _floor_scaled(p.hi, k)
            if lo > hi:
                continue  # piece narrower than the grid: dropped, loss < 2 steps
            if lo == hi:
                if p.contains(lo):
                    out = iset_join(out, interval(lo, lo))
                continue
            out = iset_join(out, interval(lo, hi, p.contains(lo), p.contains(hi)))
        return out

    return DenseOracle(name="dyadic-endpoints", witness=witness, member=is_dyadic_set)


class OracleContractViolation(ValueError):
    pass


def dense_approximate(
    phi: Valuation,
    oracle: DenseOracle,
    seq: MonoSeq,
    eps_index: int,
    depth: int,
) -> tuple[MonoSeq, list[dict]]:
    """Approximate a decreasing sequence from below inside a dense sublattice.

    Tolerance schedule: stage k pulls its witness at index eps_index + k + 2,
    so the telescoped loss after any number of stages stays strictly below
    2^-(eps_index + 1).  Output stages are running meets of the witnesses,
    hence decreasing and stage-wise below the input; the per-stage exact
    bound check is returned as a trace.
    """
    if seq.direction != "decreasing":
        raise ValueError("dense approximation starts from a decreasing sequence")
    if eps_index < 1 or depth < 1:
        raise ValueError("eps_index and depth must be >= 1")
    lat, g = phi.domain, phi.group

    tilde: list[Any] = []
    trace: list[dict] = []
    budget = Fraction(0)
    acc = None
    for n in range(1, depth + 1):
        a_n = seq.at(n)
        zeta_index = eps_index + n + 2
        ell = oracle.witness(a_n, zeta_index)
        if not lat.leq(ell, a_n):
            raise OracleContractViolation(
                f"oracle witness at stage {n} is not below the stage element"
            )
        if not oracle.member(ell):
            raise OracleContractViolation(
                f"oracle witness at stage {n} left the declared sublattice"
            )
        gap = g.sub(phi(a_n), phi(ell))
        if not (g.leq(g.zero(), gap) and g.leq(gap, Fraction(1, 2**zeta_index))):
            raise OracleContractViolation(
                f"oracle witness at stage {n} misses its tolerance 2^-{zeta_index}"
            )
        acc = ell if acc is None else lat.meet(acc, ell)
        tilde.append(acc)
        budget += Fraction(1, 2**zeta_index)

        stage_gap = dist(phi, acc, a_n)
        ok = g.leq(stage_gap, budget)
        within_eps = g.leq(stage_gap, Fraction(1, 2 ** (eps_index + 1)))
        trace.append(
            {
                "stage": n,
                "phi_a": phi(a_n),
                "phi_atilde": phi(acc),
                "bound": budget,
                "gap": stage_gap,
                "within_budget": ok,
                "within_eps": within_eps,
            }
        )
        if not ok or not within_eps:
            raise AssertionError(
                f"telescoped bound failed at stage {n}: gap {stage_gap} budget {budget}"
            )

    stages = list(tilde)

    def producer(n: int):
        if n <= len(stages):
            return stages[n - 1]
        raise IndexError(f"approximation computed to depth {len(stages)} only")

    def modulus(eps: Fraction) -> int:
        # Cauchy stage from the source modulus; the 2^-(i+1) padding covers
        # the approximation loss.
        eps = rat(eps)
        i = 1
        while Fraction(1, 2**i) > eps:
            i += 1
        return min(max(i, seq.modulus(Fraction(1, 2 ** (i + 1)))), len(stages))

    out = MonoSeq(lat, "decreasing", producer, modulus, sanity_depth=min(seq.sanity_depth, depth))
    return out, trace


def weak_conv_check(
    phi: Valuation,
    producer: Callable[[int], Any],
    target: Any,
    rate: Callable[[int], int],
    depth: int,
    uniformity: FittingUniformity = DYADIC,
    max_index: int = 16,
) -> CheckReport:
    """Verify a declared weak-convergence rate at truncation depth.

    For each index i with rate(i) <= depth, every stage n in
    [rate(i), depth] must satisfy holds(i, 0, d(a_n, target)).
    """
    g = phi.group
    report = CheckReport()
    prev = None
    for i in range(1, max_index + 1):
        n0 = rate(i)
        if prev is not None and n0 < prev:
            report.record("rate monotone", False, f"rate({i}) < rate({i - 1})")
        else:
            report.record("rate monotone", True, f"i={i}")
        prev = n0
        if n0 > depth:
            continue
        for n in range(n0, depth + 1):
            d = dist(phi, producer(n), target)
            report.record(
                "weak convergence at declared rate",
                uniformity.holds(i, g.zero(), d),
                f"i={i} n={n} d={g.fmt(d)}",
            )
    return report


def extract_subsequence(
    phi: Valuation,
    producer: Callable[[int], Any],
    target: Any,
    rate: Callable[[int], int],
    count: int,
    uniformity: FittingUniformity = DYADIC,
) -> tuple[list[int], list[Fraction]]:
    """Select stages far enough out that the distances sum geometrically.

    Picks j_k = rate(k + 1) (re-indexed to strictly increasing by running
    max + 1 when the rate stalls), checks d(target, a_{j_k}) <= 2^-(k+1),
    and returns the indices with the partial sums of the distances, which
    the geometric majorant keeps below 1.
    """
    g = phi.group
    indices: list[int] = []
    partial_sums: list[Fraction] = []
    total = Fraction(0)
    prev = 0
    for k in range(1, count + 1):
        j = rate(k + 1)
        if j <= prev:
            j = prev + 1
        prev = j
        d = dist(phi, producer(j), target)
        if not uniformity.holds(k + 1, g.zero(), d):
            raise AssertionError(
                f"stage {j} misses its 2^-{k + 1} distance bound: d={g.fmt(d)}"
            )
        indices.append(j)
        total += d
        partial_sums.append(total)
    if total > 1:
        raise AssertionError(f"partial sums escaped the geometric majorant: {total}")
    return indices, partial_sums
