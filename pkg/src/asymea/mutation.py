"""Standard, static asymmetric and pair-parameterised asymmetric bit mutation.

All operators share one sampler: within each bit class the flipped members
are found by geometric gap skipping, so a mutation costs O(1 + flips) once
the class member lists exist. The EA loop keeps those lists up to date
incrementally; the standalone functions here build them per call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .bitstring import BitString, apply_flips

OPERATORS = ("standard", "static-asym", "self-adjusting-asym")


@dataclass(frozen=True)
class ProbabilityPair:
    """Per-bit flip probabilities: ``p0`` for 0-bits, ``p1`` for 1-bits."""

    p0: float
    p1: float

    def __post_init__(self):
        for name in ("p0", "p1"):
            p = getattr(self, name)
            if not (0.0 <= p <= 1.0):  # also rejects NaN
                raise ValueError(f"{name} must lie in [0, 1], got {p}")


@njit(nogil=True, cache=True, inline="always")
def sample_class(members, count, p, log_q, rng, out, k):
    """Append each of ``members[:count]`` to ``out[k:]`` independently w.p. ``p``.

    ``log_q`` must equal ``log1p(-p)``; callers cache it because ``p`` rarely
    changes between iterations. Gaps between selected members are geometric,
    drawn by inversion and compared as floats so that huge gaps for tiny ``p``
    never reach an int cast. Returns the new fill level of ``out``.
    """
    if count == 0 or p <= 0.0:
        return k
    if p >= 1.0:
        for j in range(count):
            out[k] = members[j]
            k += 1
        return k
    j = -1
    while True:
        gap = math.log(1.0 - rng.random()) / log_q
        if gap >= count - 1 - j:
            break
        j += int(gap) + 1
        out[k] = members[j]
        k += 1
    return k


@njit(nogil=True, cache=True)
def _sample_flips(zero_pos, one_pos, p0, p1, rng, out):
    k = sample_class(zero_pos, zero_pos.size, p0, math.log1p(-p0), rng, out, 0)
    return sample_class(one_pos, one_pos.size, p1, math.log1p(-p1), rng, out, k)


def flip_positions(x: BitString, pair: ProbabilityPair, rng: np.random.Generator) -> np.ndarray:
    """Sample the set of positions flipped by asymmetric mutation with ``pair``."""
    zero_pos = np.flatnonzero(x.bits == 0)
    one_pos = np.flatnonzero(x.bits)
    out = np.empty(x.n, dtype=np.int64)
    k = _sample_flips(zero_pos, one_pos, float(pair.p0), float(pair.p1), rng, out)
    return out[:k]


def asymmetric_mutate(x: BitString, pair: ProbabilityPair, rng: np.random.Generator) -> BitString:
    return apply_flips(x, flip_positions(x, pair, rng))


def standard_mutate(x: BitString, rng: np.random.Generator) -> BitString:
    """Flip every bit independently with probability ``1/n``."""
    return asymmetric_mutate(x, ProbabilityPair(1.0 / x.n, 1.0 / x.n), rng)


def class_probability(strength: float, count: int) -> float:
    """Per-bit rate ``strength / count``; an empty class gets rate 0."""
    return strength / count if count > 0 else 0.0


def static_pair(x: BitString) -> ProbabilityPair:
    """The static asymmetric pair ``(1/(2 |x|_0), 1/(2 |x|_1))``."""
    return ProbabilityPair(
        class_probability(0.5, x.count_zeros),
        class_probability(0.5, x.count_ones),
    )


def expected_flips(x: BitString, pair: ProbabilityPair) -> tuple[float, float]:
    return pair.p0 * x.count_zeros, pair.p1 * x.count_ones

