"""OneMax_a: the number of positions where a search point matches a hidden target."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitstring import BitString, hamming

TARGET_PRESETS = ("all-ones", "all-zeros", "half-split")


@dataclass(frozen=True)
class Target:
    a: BitString

    @property
    def n(self) -> int:
        return self.a.n

    @property
    def ones_a(self) -> int:
        return self.a.count_ones

    @property
    def zeros_a(self) -> int:
        return self.a.count_zeros

    @property
    def z(self) -> int:
        return min(self.ones_a, self.zeros_a)

    @classmethod
    def all_ones(cls, n: int) -> Target:
        return cls(BitString.ones(n))

    @classmethod
    def all_zeros(cls, n: int) -> Target:
        return cls(BitString.zeros(n))

    @classmethod
    def half_split(cls, n: int) -> Target:
        """``0^(n//2) 1^(n - n//2)``."""
        bits = np.zeros(n, dtype=np.uint8)
        bits[n // 2:] = 1
        return cls(BitString(bits))

    @classmethod
    def from_pattern(cls, pattern: str) -> Target:
        return cls(BitString.from_str(pattern))


def parse_target(name: str, n: int | None = None) -> Target:
    """Build a target from a CLI name.

    Accepts ``all-ones``, ``all-zeros``, ``half-split`` (these need ``n``) or
    ``pattern:<bits>``, whose length must agree with ``n`` when given.
    """
    if name.startswith("pattern:"):
        target = Target.from_pattern(name[len("pattern:"):])
        if n is not None and target.n != n:
            raise ValueError(f"pattern length {target.n} does not match n={n}")
        return target
    if name not in TARGET_PRESETS:
        raise ValueError(
            f"unknown target {name!r}; expected one of {', '.join(TARGET_PRESETS)} or pattern:<bits>"
        )
    if n is None or n < 1:
        raise ValueError(f"target {name!r} needs a positive n")
    if name == "all-ones":
        return Target.all_ones(n)
    if name == "all-zeros":
        return Target.all_zeros(n)
    return Target.half_split(n)


def evaluate(x: BitString, target: Target) -> int:
    """OneMax_a fitness ``n - H(x, a)``."""
    return x.n - hamming(x, target.a)


def is_optimum(x: BitString, target: Target) -> bool:
    return evaluate(x, target) == x.n


@dataclass(frozen=True)
class BitProfile:
    """Counts ``n_vw`` of positions with ``x_i = v`` and ``a_i = w``.

    ``n01`` are incorrect zeros and ``n10`` incorrect ones; flipping those
    gains fitness, flipping ``n00``/``n11`` loses it.
    """

    n00: int
    n01: int
    n10: int
    n11: int

    def __post_init__(self):
        if min(self.n00, self.n01, self.n10, self.n11) < 0:
            raise ValueError(f"negative count in {self}")

    @property
    def n(self) -> int:
        return self.n00 + self.n01 + self.n10 + self.n11

    @property
    def zeros(self) -> int:
        return self.n00 + self.n01

    @property
    def ones(self) -> int:
        return self.n10 + self.n11

    @property
    def fitness(self) -> int:
        return self.n00 + self.n11

    def realize(self) -> tuple[BitString, Target]:
        """A concrete ``(x, target)`` pair with this profile."""
        x = np.repeat(np.array([0, 0, 1, 1], dtype=np.uint8), [self.n00, self.n01, self.n10, self.n11])
        a = np.repeat(np.array([0, 1, 0, 1], dtype=np.uint8), [self.n00, self.n01, self.n10, self.n11])
        return BitString(x), Target(BitString(a))


def classify(x: BitString, target: Target) -> BitProfile:
    if x.n != target.n:
        raise ValueError(f"length mismatch: {x.n} vs {target.n}")
    code = 2 * x.bits.astype(np.int64) + target.a.bits
    counts = np.bincount(code, minlength=4)
    return BitProfile(*(int(c) for c in counts))
