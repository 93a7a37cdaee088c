"""Success-based self-adjustment of the 0-strength.

The 0-strength ``r0`` lives on the grid ``2a, 3a, ...`` capped at ``1 - 2a``
(``a`` the learning rate) and is stored as an integer level, so clamping and
grid membership are exact. ``r1 = 1 - r0`` always.

Within a phase of ``N`` iterations odd iterations use the pair
``p- = ((r0 - a)/|x|_0, (r1 + a)/|x|_1)`` and even ones
``p+ = ((r0 + a)/|x|_0, (r1 - a)/|x|_1)``. A strict improvement under ``p-``
decrements the balance ``b``, under ``p+`` increments it. At the end of the
phase ``r0`` moves one level in the direction of the winning pair, or in a
uniformly random direction on a tie, and ``b`` is reset.

The numba functions are the single implementation; the EA loop calls them
directly and :class:`ControllerState` wraps them for Python callers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from numba import njit

from .bitstring import BitString
from .mutation import ProbabilityPair

_GRID_EPS = 1e-9


@njit(nogil=True, cache=True)
def strengths(level, top, alpha):
    """``(r0, r1)`` for a grid level, with ``r0 + r1 == 1`` exactly in floating point."""
    if level >= top:
        r0 = 1.0 - 2.0 * alpha
    else:
        r0 = (2.0 + level) * alpha
    # 1 - y is exact for y in [0.5, 1], so derive the smaller value from the larger
    if r0 >= 0.5:
        return r0, 1.0 - r0
    r1 = 1.0 - r0
    return 1.0 - r1, r1


@njit(nogil=True, cache=True)
def pair_for(level, top, alpha, t, zeros, ones):
    """Probability pair for iteration ``t`` (1-based): ``p-`` if odd, ``p+`` if even."""
    r0, r1 = strengths(level, top, alpha)
    if t % 2 == 1:
        s0 = r0 - alpha
        s1 = r1 + alpha
    else:
        s0 = r0 + alpha
        s1 = r1 - alpha
    p0 = s0 / zeros if zeros > 0 else 0.0
    p1 = s1 / ones if ones > 0 else 0.0
    return p0, p1


@njit(nogil=True, cache=True)
def update_balance(b, t, improved):
    if improved:
        if t % 2 == 1:
            return b - 1
        return b + 1
    return b


@njit(nogil=True, cache=True)
def next_level(level, top, b, u):
    """Level after a phase boundary and the chosen direction (-1 or +1).

    ``u`` is a uniform draw used only when ``b == 0``; ``u < 0.5`` selects the
    decrease. The direction is reported even when the clamp absorbs the move.
    """
    if b < 0:
        direction = -1
    elif b > 0:
        direction = 1
    elif u < 0.5:
        direction = -1
    else:
        direction = 1
    new = level + direction
    if new < 0:
        new = 0
    elif new > top:
        new = top
    return new, direction


def grid_top(alpha: float) -> int:
    """Index of the highest level, ``ceil((1 - 4a) / a)``."""
    return max(math.ceil((1.0 - 4.0 * alpha) / alpha - _GRID_EPS), 0)


def nearest_level(r0: float, alpha: float) -> int:
    """Grid level closest to ``r0``; ties go to the lower level."""
    top = grid_top(alpha)
    best, best_dist = 0, math.inf
    for k in range(top + 1):
        dist = abs(strengths(k, top, alpha)[0] - r0)
        if dist < best_dist - _GRID_EPS:
            best, best_dist = k, dist
    return best


def validate_parameters(alpha: float, phase_length: int) -> None:
    if not (0.0 < alpha < 0.25):
        raise ValueError(f"alpha must lie in (0, 1/4), got {alpha}")
    if isinstance(phase_length, bool) or int(phase_length) != phase_length:
        raise ValueError(f"phase length N must be an integer, got {phase_length!r}")
    if phase_length < 2 or phase_length % 2:
        raise ValueError(f"phase length N must be a positive even integer, got {phase_length}")


@dataclass(frozen=True)
class ControllerState:
    alpha: float
    phase_length: int
    level: int
    top: int
    b: int = 0
    t: int = 0
    direction: int = 0  # move chosen at the most recent phase boundary

    @property
    def r0(self) -> float:
        return strengths(self.level, self.top, self.alpha)[0]

    @property
    def r1(self) -> float:
        return strengths(self.level, self.top, self.alpha)[1]

    @property
    def at_phase_boundary(self) -> bool:
        return self.t > 0 and self.t % self.phase_length == 0

    def with_r0(self, r0: float) -> ControllerState:
        """Copy with ``r0`` set; ``r0`` must be a grid point."""
        level = nearest_level(r0, self.alpha)
        if abs(strengths(level, self.top, self.alpha)[0] - r0) > _GRID_EPS:
            raise ValueError(f"r0={r0} is not on the grid for alpha={self.alpha}")
        return replace(self, level=level)


def initial_state(alpha: float, phase_length: int) -> ControllerState:
    validate_parameters(alpha, phase_length)
    return ControllerState(
        alpha=float(alpha),
        phase_length=int(phase_length),
        level=nearest_level(0.5, alpha),
        top=grid_top(alpha),
    )


def current_pair(state: ControllerState, x: BitString) -> ProbabilityPair:
    """Pair used by the next iteration ``t + 1``."""
    p0, p1 = pair_for(state.level, state.top, state.alpha, state.t + 1, x.count_zeros, x.count_ones)
    return ProbabilityPair(p0, p1)


def record_outcome(state: ControllerState, strict_improvement: bool) -> ControllerState:
    t = state.t + 1
    return replace(state, t=t, b=update_balance(state.b, t, bool(strict_improvement)))


def phase_boundary_update(state: ControllerState, rng) -> ControllerState:
    """Move ``r0`` one level according to ``b`` and reset ``b``.

    ``rng`` needs a ``random()`` method; one draw is consumed per call.
    """
    if not state.at_phase_boundary:
        raise ValueError(
            f"phase boundary update at t={state.t}, which is not a positive multiple of N={state.phase_length}"
        )
    u = float(rng.random())
    level, direction = next_level(state.level, state.top, state.b, u)
    return replace(state, level=level, b=0, direction=direction)
