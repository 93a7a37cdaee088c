"""Run-time summaries and the Mann-Whitney U rank-sum test."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

EXACT_THRESHOLD = 20


@dataclass(frozen=True)
class SampleSummary:
    count: int
    mean: float
    std: float  # Bessel-corrected; 0 for a single sample


def summarize(samples: Sequence[float]) -> SampleSummary:
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("cannot summarize an empty sample")
    std = float(np.std(x, ddof=1)) if x.size > 1 else 0.0
    return SampleSummary(int(x.size), float(np.mean(x)), std)


@dataclass(frozen=True)
class MannWhitneyResult:
    u: float  # pairs (a, b) with a > b, ties counting 1/2
    p_value: float  # two-sided
    method: str  # "exact" or "asymptotic"


def _exact_p(ranks: np.ndarray, na: int, u: float) -> float:
    """Two-sided p from the permutation distribution of the midrank sum.

    Midranks are halves of integers, so twice the rank sum is an integer and
    the distribution over all ``C(N, na)`` splits is built by a subset-sum
    recursion; this is exact with ties.
    """
    scores = np.rint(2 * ranks).astype(np.int64)
    top = int(np.sort(scores)[-na:].sum())
    ways = np.zeros((na + 1, top + 1))
    ways[0, 0] = 1.0
    for i, s in enumerate(scores):
        for c in range(min(i + 1, na), 0, -1):
            ways[c, s:] += ways[c - 1, : top + 1 - s]
    dist = ways[na] / ways[na].sum()
    observed = int(round(2 * (u + na * (na + 1) / 2)))
    lower = dist[: observed + 1].sum()
    upper = dist[observed:].sum()
    return float(min(1.0, 2.0 * min(lower, upper)))


def _asymptotic_p(ranks: np.ndarray, na: int, nb: int, u: float) -> float:
    """Normal approximation with tie-corrected variance and continuity correction."""
    n = na + nb
    _, tie_counts = np.unique(ranks, return_counts=True)
    tie_term = float(np.sum(tie_counts.astype(float) ** 3 - tie_counts))
    var = na * nb / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if var <= 0.0:
        return 1.0
    z = max(abs(u - na * nb / 2.0) - 0.5, 0.0) / math.sqrt(var)
    return float(min(1.0, math.erfc(z / math.sqrt(2.0))))


def mann_whitney_u(
    sample_a: Sequence[float], sample_b: Sequence[float], method: str = "auto"
) -> MannWhitneyResult:
    """Two-sided Mann-Whitney U test.

    ``method="auto"`` uses the exact permutation distribution when the smaller
    sample has fewer than 20 values and the normal approximation otherwise.
    """
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be nonempty")
    if method == "auto":
        method = "exact" if min(a.size, b.size) < EXACT_THRESHOLD else "asymptotic"
    ranks = rankdata(np.concatenate([a, b]))
    u = float(ranks[: a.size].sum() - a.size * (a.size + 1) / 2)
    if method == "exact":
        # the recursion is cheaper over the smaller sample; the two-sided p is symmetric
        if a.size <= b.size:
            p = _exact_p(ranks, a.size, u)
        else:
            p = _exact_p(ranks, b.size, a.size * b.size - u)
    elif method == "asymptotic":
        p = _asymptotic_p(ranks, a.size, b.size, u)
    else:
        raise ValueError(f"unknown method {method!r}")
    # keep p strictly positive when the normal tail underflows
    return MannWhitneyResult(u, max(p, np.finfo(float).tiny), method)
