"""Fixed-length bit strings with cached zero/one counts."""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np


class BitString:
    """An immutable bit string of length ``n >= 1``.

    Bits are held in a read-only ``uint8`` array; the number of one-bits is
    cached so that ``count_ones``/``count_zeros`` are O(1). Position 0 is
    rendered first by ``str()``.
    """

    __slots__ = ("_bits", "_ones")

    def __init__(self, bits, count_ones: int | None = None):
        arr = np.array(bits, dtype=np.uint8, copy=True).reshape(-1)
        if arr.size == 0:
            raise ValueError("bit string length must be >= 1")
        if np.any(arr > 1):
            raise ValueError("bits must be 0 or 1")
        arr.setflags(write=False)
        self._bits = arr
        self._ones = int(np.count_nonzero(arr)) if count_ones is None else int(count_ones)

    @classmethod
    def from_str(cls, text: str) -> BitString:
        if not text or any(c not in "01" for c in text):
            raise ValueError(f"not a bit pattern: {text!r}")
        return cls(np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0"))

    @classmethod
    def ones(cls, n: int) -> BitString:
        return cls(np.ones(n, dtype=np.uint8), count_ones=n)

    @classmethod
    def zeros(cls, n: int) -> BitString:
        return cls(np.zeros(n, dtype=np.uint8), count_ones=0)

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def n(self) -> int:
        return self._bits.size

    @property
    def count_ones(self) -> int:
        return self._ones

    @property
    def count_zeros(self) -> int:
        return self._bits.size - self._ones

    def __len__(self) -> int:
        return self._bits.size

    def __getitem__(self, i: int) -> int:
        return int(self._bits[i])

    def __str__(self) -> str:
        return (self._bits + ord("0")).tobytes().decode("ascii")

    def __repr__(self) -> str:
        s = str(self)
        if len(s) > 64:
            s = s[:61] + "..."
        return f"BitString('{s}')"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._bits, other._bits))

    def __hash__(self) -> int:
        return hash(self._bits.tobytes())

    def apply_flips(self, positions: Iterable[int]) -> BitString:
        return apply_flips(self, positions)


def random_uniform(n: int, rng: np.random.Generator) -> BitString:
    """Sample a string uniformly from ``{0,1}^n``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    bits = np.asarray(rng.integers(0, 2, size=n), dtype=np.uint8)
    return BitString(bits)


def hamming(x: BitString, y: BitString) -> int:
    if x.n != y.n:
        raise ValueError(f"length mismatch: {x.n} vs {y.n}")
    return int(np.count_nonzero(x.bits != y.bits))


def apply_flips(x: BitString, positions: Iterable[int]) -> BitString:
    """Return a copy of ``x`` with the given positions inverted.

    Repeated indices count once. The one-count is updated from the flipped
    positions only, without rescanning the string.
    """
    idx = np.unique(np.fromiter(positions, dtype=np.int64))
    if idx.size and (idx[0] < 0 or idx[-1] >= x.n):
        raise IndexError(f"flip position out of range for n={x.n}")
    bits = x.bits.copy()
    flipped_ones = int(np.count_nonzero(bits[idx]))
    bits[idx] ^= 1
    ones = x.count_ones - flipped_ones + (idx.size - flipped_ones)
    return BitString(bits, count_ones=ones)
