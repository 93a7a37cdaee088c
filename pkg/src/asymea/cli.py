"""Command line interface: ``asymea {run,experiment,compare,verify-lemma,oracle}``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import harness
from .ea import DEFAULT_ALPHA, DEFAULT_PHASE_LENGTH, RunConfig, run
from .fitness import BitProfile, parse_target
from .mutation import OPERATORS, ProbabilityPair
from .oracle import exact_success_probability, lemma1_sweep, mc_success_probability

LEMMA_FIELDS = ("zeros", "ones", "r0", "beta", "lhs", "rhs", "margin", "satisfied")
DEFAULT_LEMMA_COUNTS = (1, 2, 5, 10, 100, 1000)
DEFAULT_LEMMA_R0 = (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8)
DEFAULT_LEMMA_BETA = (0.0, 0.05, 0.1, 0.15)


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _cmd_run(args) -> int:
    config = RunConfig(
        n=args.n,
        target=parse_target(args.target, args.n),
        operator=args.operator,
        alpha=args.alpha,
        phase_length=args.phase_length,
        seed=args.seed,
        max_evaluations=args.max_evaluations,
        trace=args.trace_out is not None,
    )
    record = run(config)
    print(json.dumps({
        "algorithm": config.operator,
        "n": config.n,
        "target": args.target,
        "seed": record.seed,
        "evaluations": record.evaluations,
        "final_fitness": record.final_fitness,
        "improvement_count": record.improvement_count,
        "phases": len(record.strength_trace) if record.strength_trace is not None else None,
    }, indent=2))
    if args.trace_out is not None:
        with open(args.trace_out, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=harness.TRACE_FIELDS, lineterminator="\n")
            w.writeheader()
            w.writerows(harness.trace_rows(0, record))
    return 0 if not record.cap_reached else 2


def _cmd_experiment(args) -> int:
    if args.config is not None:
        spec = harness.parse_config(Path(args.config).read_text())
    else:
        spec = harness.preset_spec(args.preset)
    spec = harness.with_overrides(
        spec, runs=args.runs, master_seed=args.seed, output=args.output, parallelism=args.parallelism
    )
    result = harness.run_experiment(spec)
    w = csv.DictWriter(sys.stdout, fieldnames=harness.SUMMARY_FIELDS, lineterminator="\n")
    w.writeheader()
    w.writerows(result.summaries)
    print(f"# wrote {result.runs_path} and {result.summary_path}", file=sys.stderr)
    return 0


def _cmd_compare(args) -> int:
    rows_a = harness.select_rows(harness.read_rows(args.file_a), args.algorithm_a, args.n)
    rows_b = harness.select_rows(harness.read_rows(args.file_b), args.algorithm_b, args.n)
    evals_a = harness.completed_evaluations(rows_a)
    evals_b = harness.completed_evaluations(rows_b)
    if not evals_a or not evals_b:
        print("error: a selection contains no completed runs", file=sys.stderr)
        return 1
    cmp = harness.compare_samples(evals_a, evals_b)
    sa, sb, test = cmp.summary_a, cmp.summary_b, cmp.test
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["count_a", "mean_a", "std_a", "count_b", "mean_b", "std_b", "U", "p_two_sided", "method"])
    w.writerow([sa.count, repr(sa.mean), repr(sa.std), sb.count, repr(sb.mean), repr(sb.std),
                repr(test.u), repr(test.p_value), test.method])
    print(
        f"\nA: {args.file_a}  n={sa.count}  mean={sa.mean:.6g}  std={sa.std:.6g}\n"
        f"B: {args.file_b}  n={sb.count}  mean={sb.mean:.6g}  std={sb.std:.6g}\n"
        f"Mann-Whitney U={test.u:.6g}  two-sided p={test.p_value:.4g} ({test.method})"
    )
    return 0


def _cmd_verify_lemma(args) -> int:
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    violations = total = 0
    try:
        w = csv.DictWriter(out, fieldnames=LEMMA_FIELDS, lineterminator="\n")
        w.writeheader()
        for chk in lemma1_sweep(args.zeros, args.ones, args.r0, args.beta):
            total += 1
            violations += not chk.satisfied
            w.writerow({
                "zeros": chk.zeros, "ones": chk.ones, "r0": repr(chk.r0), "beta": repr(chk.beta),
                "lhs": repr(chk.lhs), "rhs": repr(chk.rhs), "margin": repr(chk.margin),
                "satisfied": chk.satisfied,
            })
    finally:
        if out is not sys.stdout:
            out.close()
    print(f"# {total} combinations checked, {violations} violations", file=sys.stderr)
    return 1 if violations else 0


def _cmd_oracle(args) -> int:
    profile = BitProfile(*args.profile)
    pair = ProbabilityPair(*args.pair)
    result = {"profile": list(args.profile), "pair": [pair.p0, pair.p1],
              "exact": exact_success_probability(profile, pair)}
    if args.samples:
        est = mc_success_probability(profile, pair, args.samples, np.random.default_rng(args.seed))
        result.update(mc_estimate=est.estimate, mc_stderr=est.stderr, mc_samples=est.samples)
    print(json.dumps(result, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="asymea", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="single EA run")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--target", default="all-ones", help="all-ones, all-zeros, half-split or pattern:<bits>")
    p.add_argument("--operator", choices=OPERATORS, default="self-adjusting-asym")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--N", dest="phase_length", type=int, default=DEFAULT_PHASE_LENGTH)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-evaluations", type=int)
    p.add_argument("--trace-out", help="write the per-phase strength trace as CSV")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("experiment", help="sweep (algorithm, n) cells and write CSVs")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="YAML config file")
    src.add_argument("--preset", choices=sorted(harness.PRESETS))
    p.add_argument("--runs", type=int)
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--output", help="output directory")
    p.add_argument("--parallelism", type=int)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("compare", help="Mann-Whitney U test between two run CSVs")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--algorithm-a")
    p.add_argument("--algorithm-b")
    p.add_argument("--n", type=int)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("verify-lemma", help="sweep the success-probability shift inequality")
    p.add_argument("--zeros", type=_ints, default=list(DEFAULT_LEMMA_COUNTS))
    p.add_argument("--ones", type=_ints, default=list(DEFAULT_LEMMA_COUNTS))
    p.add_argument("--r0", type=_floats, default=list(DEFAULT_LEMMA_R0))
    p.add_argument("--beta", type=_floats, default=list(DEFAULT_LEMMA_BETA))
    p.add_argument("--output", help="CSV path (default stdout)")
    p.set_defaults(func=_cmd_verify_lemma)

    p = sub.add_parser("oracle", help="exact (and optionally Monte Carlo) success probability")
    p.add_argument("--profile", type=_ints, required=True, help="n00,n01,n10,n11")
    p.add_argument("--pair", type=_floats, required=True, help="p0,p1")
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.command == "oracle" and (len(args.profile) != 4 or len(args.pair) != 2):
        parser.error("--profile needs 4 counts and --pair 2 probabilities")
    try:
        return args.func(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
