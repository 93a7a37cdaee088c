"""The (1+1) EA with standard, static asymmetric or self-adjusting asymmetric mutation."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from numba import njit

from . import controller as ctl
from .bitstring import BitString, random_uniform
from .fitness import Target, evaluate
from .mutation import OPERATORS, sample_class

STANDARD, STATIC_ASYM, SELF_ADJUSTING = range(3)
_MODE = {name: i for i, name in enumerate(OPERATORS)}

DEFAULT_ALPHA = 0.1
DEFAULT_PHASE_LENGTH = 50
CAP_REACHED = "cap-reached"
_MAX_TRACE_PHASES = 10**8


@dataclass(frozen=True)
class RunConfig:
    n: int
    target: Target
    operator: str = "self-adjusting-asym"
    alpha: float = DEFAULT_ALPHA
    phase_length: int = DEFAULT_PHASE_LENGTH
    seed: int = 0
    max_evaluations: int | None = None  # None -> 10^4 * n
    trace: bool = False
    initial: BitString | None = None  # overrides the uniform initial sample
    check: bool = False  # re-evaluate fitness from scratch every iteration

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.target.n != self.n:
            raise ValueError(f"target length {self.target.n} does not match n={self.n}")
        if self.operator not in _MODE:
            raise ValueError(f"unknown operator {self.operator!r}; expected one of {', '.join(OPERATORS)}")
        if self.operator == "self-adjusting-asym":
            ctl.validate_parameters(self.alpha, self.phase_length)
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.max_evaluations is not None and self.max_evaluations < 1:
            raise ValueError(f"max_evaluations must be >= 1, got {self.max_evaluations}")
        if self.initial is not None and self.initial.n != self.n:
            raise ValueError(f"initial point length {self.initial.n} does not match n={self.n}")

    @property
    def evaluation_cap(self) -> int:
        return self.max_evaluations if self.max_evaluations is not None else 10_000 * self.n


@dataclass(frozen=True)
class PhaseRecord:
    phase: int  # 0-based
    r0: float  # strength used during the phase
    b: int  # balance at the end of the phase
    direction: int  # -1 decrease, +1 increase


@dataclass(frozen=True)
class RunRecord:
    seed: int
    evaluations_to_optimum: int | None  # None when the cap was hit
    final_fitness: int
    improvement_count: int
    strength_trace: tuple[PhaseRecord, ...] | None = field(default=None, repr=False)

    @property
    def cap_reached(self) -> bool:
        return self.evaluations_to_optimum is None

    @property
    def evaluations(self) -> int | str:
        return CAP_REACHED if self.evaluations_to_optimum is None else self.evaluations_to_optimum


@njit(nogil=True, cache=True)
def _flip_member(i, src, n_src, dst, n_dst, slot):
    """Move position ``i`` from list ``src`` to the end of ``dst``."""
    j = slot[i]
    last = src[n_src - 1]
    src[j] = last
    slot[last] = j
    dst[n_dst] = i
    slot[i] = n_dst


@njit(nogil=True, cache=True)
def _consistent(x, a, fitness, zero_pos, nz, one_pos, no, slot):
    """Full O(n) rescan of the incremental fitness and class lists."""
    if nz + no != x.size:
        return False
    matches = 0
    for i in range(x.size):
        if x[i] == a[i]:
            matches += 1
    if matches != fitness:
        return False
    for j in range(nz):
        if x[zero_pos[j]] != 0 or slot[zero_pos[j]] != j:
            return False
    for j in range(no):
        if x[one_pos[j]] != 1 or slot[one_pos[j]] != j:
            return False
    return True


@njit(nogil=True, cache=True)
def _evolve(x, a, mode, alpha, phase_length, top, level, max_evals, rng, trace, check):
    n = x.size
    zero_pos = np.empty(n, np.int64)
    one_pos = np.empty(n, np.int64)
    slot = np.empty(n, np.int64)
    nz = 0
    no = 0
    fitness = 0
    for i in range(n):
        if x[i] == a[i]:
            fitness += 1
        if x[i] == 0:
            zero_pos[nz] = i
            slot[i] = nz
            nz += 1
        else:
            one_pos[no] = i
            slot[i] = no
            no += 1

    flips = np.empty(n, np.int64)
    # log1p(-p) per (bit class, iteration parity); p changes only on accepted moves
    cache_p = np.full(4, -1.0)
    cache_lq = np.zeros(4)
    # sized for the worst case; untouched pages of np.empty are never committed
    cap = max_evals // phase_length + 1 if trace else 0
    tr_level = np.empty(cap, np.int64)
    tr_b = np.empty(cap, np.int64)
    tr_dir = np.empty(cap, np.int64)
    phases = 0
    improvements = 0
    b = 0
    t = 0
    if fitness == n:
        return 0, fitness, improvements, tr_level[:0], tr_b[:0], tr_dir[:0]

    half = 1.0 / n
    while t < max_evals:
        t += 1
        if mode == 2:
            p0, p1 = ctl.pair_for(level, top, alpha, t, nz, no)
        elif mode == 1:
            p0 = 0.5 / nz if nz > 0 else 0.0
            p1 = 0.5 / no if no > 0 else 0.0
        else:
            p0 = half
            p1 = half

        c0 = t & 1
        c1 = c0 + 2
        if cache_p[c0] != p0:
            cache_p[c0] = p0
            cache_lq[c0] = math.log1p(-p0)
        if cache_p[c1] != p1:
            cache_p[c1] = p1
            cache_lq[c1] = math.log1p(-p1)
        k = sample_class(zero_pos, nz, p0, cache_lq[c0], rng, flips, 0)
        k = sample_class(one_pos, no, p1, cache_lq[c1], rng, flips, k)
        gain = 0
        for j in range(k):
            i = flips[j]
            if x[i] == a[i]:
                gain -= 1
            else:
                gain += 1

        if gain >= 0:
            for j in range(k):
                i = flips[j]
                if x[i] == 0:
                    _flip_member(i, zero_pos, nz, one_pos, no, slot)
                    nz -= 1
                    no += 1
                    x[i] = 1
                else:
                    _flip_member(i, one_pos, no, zero_pos, nz, slot)
                    no -= 1
                    nz += 1
                    x[i] = 0
            fitness += gain
            if gain > 0:
                improvements += 1
            if check and not _consistent(x, a, fitness, zero_pos, nz, one_pos, no, slot):
                raise RuntimeError("incremental state diverged from a full rescan")

        if mode == 2:
            b = ctl.update_balance(b, t, gain > 0)
            if t % phase_length == 0:
                u = rng.random()
                new_level, direction = ctl.next_level(level, top, b, u)
                if trace:
                    tr_level[phases] = level
                    tr_b[phases] = b
                    tr_dir[phases] = direction
                phases += 1
                level = new_level
                b = 0

        if fitness == n:
            return t, fitness, improvements, tr_level[:phases], tr_b[:phases], tr_dir[:phases]

    return -1, fitness, improvements, tr_level[:phases], tr_b[:phases], tr_dir[:phases]


def run(config: RunConfig) -> RunRecord:
    """Run the EA until the optimum is evaluated or the evaluation cap is hit.

    The initial point is evaluation 0; every offspring costs one evaluation.
    The run is a deterministic function of ``config``.
    """
    if config.trace and config.evaluation_cap // config.phase_length > _MAX_TRACE_PHASES:
        raise ValueError("evaluation cap too large for tracing; lower max_evaluations")
    rng = np.random.default_rng(config.seed)
    x0 = config.initial if config.initial is not None else random_uniform(config.n, rng)
    x = x0.bits.copy()
    a = np.ascontiguousarray(config.target.a.bits)
    mode = _MODE[config.operator]
    alpha = float(config.alpha)
    top = ctl.grid_top(alpha) if mode == SELF_ADJUSTING else 0
    level = ctl.nearest_level(0.5, alpha) if mode == SELF_ADJUSTING else 0

    evals, fitness, improvements, tr_level, tr_b, tr_dir = _evolve(
        x, a, mode, alpha, int(config.phase_length), top, level,
        config.evaluation_cap, rng, config.trace, config.check,
    )
    if config.check:
        assert fitness == evaluate(BitString(x), config.target)

    trace = None
    if config.trace and mode == SELF_ADJUSTING:
        trace = tuple(
            PhaseRecord(i, ctl.strengths(int(lv), top, alpha)[0], int(bb), int(d))
            for i, (lv, bb, d) in enumerate(zip(tr_level, tr_b, tr_dir))
        )
    return RunRecord(
        seed=config.seed,
        evaluations_to_optimum=None if evals < 0 else int(evals),
        final_fitness=int(fitness),
        improvement_count=int(improvements),
        strength_trace=trace,
    )


def derive_seed(master_seed: int, index: int) -> int:
    """Per-run 64-bit seed, a fixed function of ``(master_seed, index)``."""
    ss = np.random.SeedSequence([int(master_seed), int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def run_batch(config: RunConfig, runs: int, master_seed: int, parallelism: int = 1) -> list[RunRecord]:
    """Independent runs of ``config`` with per-run seeds, in run-index order.

    The seed in ``config`` is ignored. Runs execute on a thread pool (the
    compiled loop releases the GIL); results do not depend on ``parallelism``.
    """
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    if parallelism < 1:
        raise ValueError(f"parallelism must be >= 1, got {parallelism}")
    configs = [replace(config, seed=derive_seed(master_seed, i)) for i in range(runs)]
    if parallelism == 1:
        return [run(c) for c in configs]
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(run, configs))
