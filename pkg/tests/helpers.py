"""Independent reference computations used as test oracles."""

from __future__ import annotations

import itertools
from math import comb

import numpy as np


def brute_force_success(n00: int, n01: int, n10: int, n11: int, p0: float, p1: float) -> float:
    """P(strict improvement) by summing over all 2^n flip masks of a concrete parent."""
    x = np.array([0] * n00 + [0] * n01 + [1] * n10 + [1] * n11)
    a = np.array([0] * n00 + [1] * n01 + [0] * n10 + [1] * n11)
    n = x.size
    if n == 0:
        return 0.0
    masks = ((np.arange(2**n)[:, None] >> np.arange(n)) & 1).astype(bool)
    rate = np.where(x == 0, p0, p1)
    prob = np.prod(np.where(masks, rate, 1.0 - rate), axis=1)
    sign = np.where(x == a, -1, 1)
    gain = (masks * sign).sum(axis=1)
    return float(prob[gain > 0].sum())


def exact_rank_sum_p(a, b) -> tuple[float, float]:
    """(one-sided lower, two-sided) p of the rank sum of ``a`` by enumerating all splits."""
    from scipy.stats import rankdata

    ranks = rankdata(np.concatenate([a, b]))
    na, total = len(a), len(a) + len(b)
    observed = ranks[:na].sum()
    sums = [ranks[list(c)].sum() for c in itertools.combinations(range(total), na)]
    assert len(sums) == comb(total, na)
    sums = np.array(sums)
    lower = np.mean(sums <= observed + 1e-9)
    upper = np.mean(sums >= observed - 1e-9)
    return float(lower), float(min(1.0, 2 * min(lower, upper)))


class ConstantStream:
    """Stand-in random stream returning fixed values."""

    def __init__(self, value: float = 0.0, integers_value: int = 1):
        self.value = value
        self.integers_value = integers_value

    def random(self, size=None):
        return self.value if size is None else np.full(size, self.value)

    def integers(self, low, high=None, size=None):
        return self.integers_value if size is None else np.full(size, self.integers_value)
