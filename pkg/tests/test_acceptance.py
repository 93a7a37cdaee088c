"""End-to-end acceptance checks with pinned tolerances.

Every check prints one PASS/FAIL line; the lines are repeated in the
"acceptance criteria" section of the pytest summary. Seeds are fixed in
advance and never tuned.
"""

import itertools
import math
import statistics

import numpy as np
import pytest

from asymea import controller as ctl
from asymea import harness
from asymea.bitstring import BitString
from asymea.ea import RunConfig, run_batch
from asymea.fitness import BitProfile, Target
from asymea.oracle import NUMERIC_SLACK, exact_success_probability, lemma1_sweep, mc_success_probability
from asymea.stats import mann_whitney_u, summarize
from helpers import brute_force_success

ALGORITHMS = ("standard", "static-asym", "self-adjusting-asym")
ALPHA, PHASE = 0.1, 50


def cell_means(n, target, runs, master_seed):
    spec = harness.ExperimentSpec(
        n_values=[n], target=target, runs=runs, alpha=ALPHA, phase_length=PHASE,
        master_seed=master_seed, parallelism=1,
    )
    out = {}
    for alg in ALGORITHMS:
        records = harness.run_cell(spec, alg, n)
        assert not any(r.cap_reached for r in records)
        out[alg] = [r.evaluations_to_optimum for r in records]
    return out


@pytest.fixture(scope="module")
def onemax_8000():
    return cell_means(8000, "all-ones", 1000, master_seed=101)


@pytest.fixture(scope="module")
def onemax_20000():
    return cell_means(20000, "all-ones", 300, master_seed=202)


@pytest.fixture(scope="module")
def half_split_8000():
    return cell_means(8000, "half-split", 1000, master_seed=303)


def test_onemax_means_n8000(onemax_8000, criterion):
    refs = {"standard": (180516.0, 0.10), "static-asym": (11875.8, 0.05), "self-adjusting-asym": (5988.52, 0.05)}
    parts, ok = [], True
    for alg, (ref, tol) in refs.items():
        s = summarize(onemax_8000[alg])
        dev = s.mean / ref - 1
        ok &= abs(dev) <= tol
        parts.append(f"{alg} {s.mean:.1f} (std {s.std:.1f}, {dev:+.2%} vs {ref}, tol {tol:.0%})")
    criterion("OneMax means at n=8000, 1000 runs", ok, "; ".join(parts))


def test_factor_two_separation(onemax_20000, criterion):
    ratio = statistics.fmean(onemax_20000["static-asym"]) / statistics.fmean(onemax_20000["self-adjusting-asym"])
    criterion("static/self-adjusting ratio at n=20000, 300 runs", 1.9 <= ratio <= 2.1, f"ratio {ratio:.4f}, need [1.9, 2.1]")


def test_half_split_indistinguishable(half_split_8000, criterion):
    means = {alg: statistics.fmean(v) for alg, v in half_split_8000.items()}
    parts, ok = [], True
    for a, b in itertools.combinations(ALGORITHMS, 2):
        p = mann_whitney_u(half_split_8000[a], half_split_8000[b]).p_value
        spread = abs(means[a] - means[b]) / min(means[a], means[b])
        ok &= p > 0.01 and spread <= 0.03
        parts.append(f"{a} vs {b}: p={p:.3g}, gap {spread:.2%}")
    detail = ", ".join(f"{a} {m:.0f}" for a, m in means.items()) + " | " + "; ".join(parts)
    criterion("half-split target at n=8000, 1000 runs: p > 0.01 and means within 3%", ok, detail)


def test_shift_inequality_sweep(criterion):
    counts = (1, 2, 5, 10, 100, 1000)
    r0s = [round(0.2 + 0.1 * i, 1) for i in range(7)]
    checks = list(lemma1_sweep(counts, counts, r0s, (0.0, 0.05, 0.1, 0.15)))
    bad = [c for c in checks if not c.satisfied]
    worst = min(c.margin for c in checks)
    criterion(
        "shifted-strength inequality sweep",
        not bad and len(checks) == len(counts) ** 2 * len(r0s) * 4,
        f"{len(checks)} combinations, {len(bad)} violations, smallest margin {worst:.3g} (slack {NUMERIC_SLACK})",
    )


def random_profile(rng, max_n):
    n = int(rng.integers(1, max_n + 1))
    return BitProfile(*(int(c) for c in rng.multinomial(n, [0.25] * 4)))


def test_oracle_matches_enumeration(criterion):
    rng = np.random.default_rng(404)
    worst = 0.0
    for _ in range(1000):
        prof = random_profile(rng, 12)
        p0, p1 = (float(v) for v in rng.random(2))
        exact = exact_success_probability(prof, (p0, p1))
        worst = max(worst, abs(exact - brute_force_success(prof.n00, prof.n01, prof.n10, prof.n11, p0, p1)))
    criterion("exact oracle vs 2^n enumeration, 1000 profiles n<=12", worst <= 1e-12, f"max abs error {worst:.3g}")


def test_oracle_matches_monte_carlo(criterion):
    rng = np.random.default_rng(505)
    samples, worst, misses = 10**6, 0.0, 0
    for _ in range(50):
        prof = random_profile(rng, 12)
        pair = tuple(float(v) for v in rng.random(2))
        exact = exact_success_probability(prof, pair)
        est = mc_success_probability(prof, pair, samples, rng)
        # standard error of the exact value, so degenerate estimates cannot hide
        se = math.sqrt(exact * (1 - exact) / samples)
        z = abs(est.estimate - exact) / se if se > 0 else (0.0 if est.estimate == exact else math.inf)
        worst = max(worst, z)
        misses += z > 3
    criterion("Monte Carlo vs exact oracle, 50 profiles at 10^6 samples", misses == 0,
              f"{misses} outside 3 SE, largest deviation {worst:.2f} SE")


def adversarial_patterns(rng):
    """Improvement oracles f(t, is_minus) that push the controller around."""
    yield "never", lambda t, minus: False
    yield "always", lambda t, minus: True
    yield "minus only", lambda t, minus: minus
    yield "plus only", lambda t, minus: not minus
    yield "random", lambda t, minus: rng.random() < 0.5
    yield "phase flip", lambda t, minus: minus == ((t // 400) % 2 == 0)
    yield "last step", lambda t, minus: t % 50 == 0


def test_controller_invariants(criterion):
    rng = np.random.default_rng(606)
    x = BitString.from_str("0" * 37 + "1" * 63)
    iterations, failures = 0, []
    settings = [(0.1, 50), (0.05, 10), (0.2, 2), (0.07, 36), (0.24, 8)]
    per_run = 10**6 // (len(settings) * 7) + 1
    for (alpha, phase), (name, improves) in itertools.product(settings, adversarial_patterns(rng)):
        state = ctl.initial_state(alpha, phase)
        minus_count = plus_count = 0
        for _ in range(per_run):
            pair = ctl.current_pair(state, x)
            minus = pair.p0 * x.count_zeros < state.r0
            minus_count += minus
            plus_count += not minus
            state = ctl.record_outcome(state, improves(state.t, minus))
            iterations += 1
            if state.r0 + state.r1 != 1.0 or not 2 * alpha - 1e-15 <= state.r0 <= 1 - 2 * alpha + 1e-15:
                failures.append(f"{name} a={alpha} t={state.t}: r0={state.r0}")
            if state.at_phase_boundary:
                state = ctl.phase_boundary_update(state, rng)
                if state.b != 0 or minus_count != phase // 2 or plus_count != phase // 2:
                    failures.append(f"{name} a={alpha} t={state.t}: b={state.b} split {minus_count}/{plus_count}")
                minus_count = plus_count = 0
    criterion("controller invariants under adversarial outcomes", not failures and iterations >= 10**6,
              f"{iterations} iterations, {len(failures)} failures" + (f", first: {failures[0]}" if failures else ""))


def test_strength_reaches_top(criterion):
    config = RunConfig(n=8000, target=Target.all_ones(8000), alpha=ALPHA, phase_length=PHASE, trace=True)
    records = run_batch(config, 100, master_seed=707)
    fractions = [f for f in (harness.top_phase_fraction(r, ALPHA, skip=10) for r in records) if f is not None]
    med = statistics.median(fractions)
    criterion("median share of phases after the 10th at r0 = 1 - 2 alpha, n=8000, 100 runs",
              med > 0.5 and len(fractions) == 100, f"median {med:.3f} over {len(fractions)} runs")


def test_self_adjusting_bracket(onemax_20000, criterion):
    n = 20000
    lo = n / 2 / (1 - ALPHA)
    hi = n / 2 / (1 - 4 * ALPHA) + 0.1 * n
    mean = statistics.fmean(onemax_20000["self-adjusting-asym"])
    criterion("self-adjusting mean at n=20000 inside the runtime bracket", lo <= mean <= hi,
              f"mean {mean:.1f}, bracket [{lo:.0f}, {hi:.0f}]")
