"""Strict-improvement probability of asymmetric mutation on OneMax_a.

For a parent with profile ``(n00, n01, n10, n11)`` and pair ``(p0, p1)`` the
fitness gain of the offspring is

    G = Bin(n01, p0) + Bin(n10, p1) - Bin(n00, p0) - Bin(n11, p1)

with all four counts independent. :func:`exact_success_probability` returns
``P(G > 0)`` by convolving the gain and loss distributions;
:func:`mc_success_probability` estimates the same quantity by mutating a
concrete parent.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.stats import binom

from .fitness import BitProfile, classify
from .mutation import ProbabilityPair, sample_class

__all__ = [
    "BitProfile",
    "classify",
    "exact_success_probability",
    "mc_success_probability",
    "MonteCarloEstimate",
    "LemmaCheck",
    "lemma1_check",
    "lemma1_sweep",
    "NUMERIC_SLACK",
]

NUMERIC_SLACK = 1e-9


def _count_pmf(count: int, p: float) -> np.ndarray:
    k = np.arange(count + 1)
    try:
        return binom.pmf(k, count, p).astype(np.longdouble)
    except OverflowError:
        # raised for p near the bottom of the float range; logpmf copes
        return np.exp(binom.logpmf(k, count, p)).astype(np.longdouble)


def _pair(pair: ProbabilityPair | tuple[float, float]) -> ProbabilityPair:
    return pair if isinstance(pair, ProbabilityPair) else ProbabilityPair(*pair)


def exact_success_probability(profile: BitProfile, pair: ProbabilityPair | tuple[float, float]) -> float:
    pair = _pair(pair)
    gain = np.convolve(_count_pmf(profile.n01, pair.p0), _count_pmf(profile.n10, pair.p1))
    loss = np.convolve(_count_pmf(profile.n00, pair.p0), _count_pmf(profile.n11, pair.p1))
    # P(G > 0) = sum_i P(gain = i) * P(loss <= i - 1)
    loss_cdf = np.cumsum(loss)
    m = min(gain.size - 1, loss_cdf.size)
    prob = np.sum(gain[1:m + 1] * loss_cdf[:m])
    if gain.size - 1 > m:
        prob += np.sum(gain[m + 1:]) * loss_cdf[-1]
    return float(min(max(prob, 0.0), 1.0))


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    stderr: float
    samples: int
    successes: int


@njit(nogil=True, cache=True)
def _count_successes(x, a, p0, p1, samples, rng):
    zero_pos = np.flatnonzero(x == 0)
    one_pos = np.flatnonzero(x)
    flips = np.empty(x.size, np.int64)
    lq0 = math.log1p(-p0)
    lq1 = math.log1p(-p1)
    hits = 0
    for _ in range(samples):
        k = sample_class(zero_pos, zero_pos.size, p0, lq0, rng, flips, 0)
        k = sample_class(one_pos, one_pos.size, p1, lq1, rng, flips, k)
        gain = 0
        for j in range(k):
            i = flips[j]
            if x[i] == a[i]:
                gain -= 1
            else:
                gain += 1
        if gain > 0:
            hits += 1
    return hits


def mc_success_probability(
    profile: BitProfile,
    pair: ProbabilityPair | tuple[float, float],
    samples: int,
    rng: np.random.Generator,
) -> MonteCarloEstimate:
    """Fraction of ``samples`` mutations of a concrete parent that strictly improve."""
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    pair = _pair(pair)
    x, target = profile.realize()
    hits = int(_count_successes(x.bits, target.a.bits, float(pair.p0), float(pair.p1), int(samples), rng))
    est = hits / samples
    return MonteCarloEstimate(est, math.sqrt(est * (1.0 - est) / samples), samples, hits)


@dataclass(frozen=True)
class LemmaCheck:
    zeros: int
    ones: int
    r0: float
    beta: float
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    @property
    def satisfied(self) -> bool:
        return self.lhs >= self.rhs - NUMERIC_SLACK


def lemma1_check(zeros: int, ones: int, r0: float, beta: float) -> LemmaCheck:
    """Compare shifted and unshifted success probabilities on OneMax.

    For the all-ones target every 0-bit is incorrect and every 1-bit correct.
    ``lhs`` is the success probability with strengths ``(r0 + beta, r1 - beta)``;
    ``rhs`` is the one with ``(r0, r1)`` plus ``r0 * r1 * (1 - exp(-beta))``,
    where ``r1 = 1 - r0``.
    """
    if zeros < 1 or ones < 1:
        raise ValueError(f"need at least one bit of each value, got zeros={zeros}, ones={ones}")
    if not 0.0 <= r0 <= 1.0:
        raise ValueError(f"r0 must lie in [0, 1], got {r0}")
    r1 = 1.0 - r0
    if not 0.0 <= beta <= r1:
        raise ValueError(f"beta must lie in [0, r1={r1}], got {beta}")
    profile = BitProfile(0, zeros, 0, ones)
    shifted = ProbabilityPair((r0 + beta) / zeros, (r1 - beta) / ones)
    base = ProbabilityPair(r0 / zeros, r1 / ones)
    lhs = exact_success_probability(profile, shifted)
    rhs = exact_success_probability(profile, base) + r1 * r0 * (1.0 - math.exp(-beta))
    return LemmaCheck(zeros, ones, r0, beta, lhs, rhs)


def lemma1_sweep(
    zeros_values: Iterable[int],
    ones_values: Iterable[int],
    r0_values: Iterable[float],
    betas: Iterable[float],
) -> Iterator[LemmaCheck]:
    """:func:`lemma1_check` over a grid, skipping combinations it rejects."""
    ones_values, r0_values, betas = list(ones_values), list(r0_values), list(betas)
    for zeros in zeros_values:
        for ones in ones_values:
            for r0 in r0_values:
                for beta in betas:
                    try:
                        yield lemma1_check(zeros, ones, r0, beta)
                    except ValueError:
                        continue
