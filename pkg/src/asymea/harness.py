"""Experiment sweeps over (algorithm, n) cells with CSV output.

A config document is a flat YAML mapping. Recognised keys::

    preset: quick              # optional; start from a named preset
    n_values: [8000, 10000]    # required unless a preset supplies it
    algorithms: [standard, static-asym, self-adjusting-asym]
    target: all-ones           # all-ones | all-zeros | half-split | pattern:<bits>
    runs: 1000
    alpha: 0.1
    N: 50                      # observation phase length, even
    master_seed: 0
    output: results            # directory receiving runs.csv and summary.csv
    parallelism: 4             # default: number of CPUs
    max_evaluations: null      # default: 10^4 * n

Unknown keys are rejected.
"""

from __future__ import annotations

import csv
import logging
import os
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np
import yaml

from . import controller as ctl
from .ea import DEFAULT_ALPHA, DEFAULT_PHASE_LENGTH, RunConfig, RunRecord, run_batch
from .fitness import parse_target
from .mutation import OPERATORS
from .stats import MannWhitneyResult, SampleSummary, mann_whitney_u, summarize

log = logging.getLogger(__name__)

RUN_FIELDS = ("algorithm", "n", "target", "alpha", "N", "run_id", "seed", "evaluations", "final_fitness")
SUMMARY_FIELDS = ("algorithm", "n", "runs", "mean", "std")
TRACE_FIELDS = ("run_id", "phase", "r0", "b", "direction")

BENCHMARK_N_VALUES = (8000, 10000, 12000, 14000, 16000, 18000, 20000)


@dataclass(frozen=True)
class ExperimentSpec:
    n_values: tuple[int, ...]
    algorithms: tuple[str, ...] = OPERATORS
    target: str = "all-ones"
    runs: int = 1000
    alpha: float = DEFAULT_ALPHA
    phase_length: int = DEFAULT_PHASE_LENGTH
    master_seed: int = 0
    output: str = "results"
    parallelism: int = field(default_factory=lambda: os.cpu_count() or 1)
    max_evaluations: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        validate_spec(self)

    @property
    def cells(self) -> list[tuple[str, int]]:
        return [(alg, n) for alg in self.algorithms for n in self.n_values]


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


def validate_spec(spec: ExperimentSpec) -> None:
    if not spec.n_values:
        raise ConfigError("n_values", "must be a nonempty list")
    if any(n < 1 for n in spec.n_values):
        raise ConfigError("n_values", f"entries must be positive, got {list(spec.n_values)}")
    if not spec.algorithms:
        raise ConfigError("algorithms", "must be a nonempty list")
    for alg in spec.algorithms:
        if alg not in OPERATORS:
            raise ConfigError("algorithms", f"unknown algorithm {alg!r}; expected one of {', '.join(OPERATORS)}")
    try:
        for n in spec.n_values:
            parse_target(spec.target, n)
    except ValueError as e:
        raise ConfigError("target", str(e)) from None
    if spec.runs < 1:
        raise ConfigError("runs", f"must be >= 1, got {spec.runs}")
    if not 0.0 < spec.alpha < 0.25:
        raise ConfigError("alpha", f"must lie in (0, 1/4), got {spec.alpha}")
    if spec.phase_length < 2 or spec.phase_length % 2:
        raise ConfigError("N", f"must be a positive even integer, got {spec.phase_length}")
    if not 0 <= spec.master_seed < 2**64:
        raise ConfigError("master_seed", f"must be a 64-bit unsigned integer, got {spec.master_seed}")
    if spec.parallelism < 1:
        raise ConfigError("parallelism", f"must be >= 1, got {spec.parallelism}")
    if spec.max_evaluations is not None and spec.max_evaluations < 1:
        raise ConfigError("max_evaluations", f"must be >= 1, got {spec.max_evaluations}")


PRESETS: dict[str, dict] = {
    "quick": {"n_values": [1000, 2000, 4000], "runs": 100},
    "table1": {"n_values": list(BENCHMARK_N_VALUES), "target": "all-ones"},
    "table2": {"n_values": list(BENCHMARK_N_VALUES), "target": "half-split"},
}

# config key -> (ExperimentSpec field, expected python types)
_KEYS = {
    "n_values": ("n_values", (list,)),
    "algorithms": ("algorithms", (list,)),
    "target": ("target", (str,)),
    "runs": ("runs", (int,)),
    "alpha": ("alpha", (int, float)),
    "N": ("phase_length", (int,)),
    "master_seed": ("master_seed", (int,)),
    "output": ("output", (str,)),
    "parallelism": ("parallelism", (int,)),
    "max_evaluations": ("max_evaluations", (int, type(None))),
}


def spec_from_mapping(doc: dict) -> ExperimentSpec:
    doc = dict(doc)
    preset = doc.pop("preset", None)
    values: dict = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError("preset", f"unknown preset {preset!r}; expected one of {', '.join(PRESETS)}")
        values.update(PRESETS[preset])
    for key, value in doc.items():
        if key not in _KEYS:
            raise ConfigError(key, "unknown configuration key")
        _, types = _KEYS[key]
        if isinstance(value, bool) or not isinstance(value, types):
            raise ConfigError(key, f"expected {' or '.join(t.__name__ for t in types)}, got {value!r}")
        values[key] = value
    if "n_values" not in values:
        raise ConfigError("n_values", "missing")
    if any(isinstance(v, bool) or not isinstance(v, int) for v in values["n_values"]):
        raise ConfigError("n_values", f"entries must be integers, got {values['n_values']!r}")
    if any(not isinstance(v, str) for v in values.get("algorithms", [])):
        raise ConfigError("algorithms", f"entries must be names, got {values['algorithms']!r}")
    kwargs = {_KEYS[k][0]: v for k, v in values.items()}
    return ExperimentSpec(**kwargs)


def parse_config(text: str) -> ExperimentSpec:
    """Parse and validate a config document (see module docstring)."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError("document", f"not valid YAML: {e}") from None
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ConfigError("document", "expected a mapping of keys to values")
    return spec_from_mapping(doc)


def preset_spec(name: str, **overrides) -> ExperimentSpec:
    return spec_from_mapping({"preset": name, **overrides})


def cell_seed(master_seed: int, algorithm: str, n: int) -> int:
    """Master seed of one (algorithm, n) cell, independent of the cell order."""
    ss = np.random.SeedSequence([int(master_seed), OPERATORS.index(algorithm), int(n)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def cell_config(spec: ExperimentSpec, algorithm: str, n: int) -> RunConfig:
    return RunConfig(
        n=n,
        target=parse_target(spec.target, n),
        operator=algorithm,
        alpha=spec.alpha,
        phase_length=spec.phase_length,
        max_evaluations=spec.max_evaluations,
    )


def run_cell(spec: ExperimentSpec, algorithm: str, n: int) -> list[RunRecord]:
    return run_batch(cell_config(spec, algorithm, n), spec.runs, cell_seed(spec.master_seed, algorithm, n), spec.parallelism)


def run_rows(spec: ExperimentSpec, algorithm: str, n: int, records: Sequence[RunRecord]) -> list[dict]:
    adaptive = algorithm == "self-adjusting-asym"
    return [
        {
            "algorithm": algorithm,
            "n": n,
            "target": spec.target,
            "alpha": repr(spec.alpha) if adaptive else "",
            "N": spec.phase_length if adaptive else "",
            "run_id": i,
            "seed": rec.seed,
            "evaluations": rec.evaluations,
            "final_fitness": rec.final_fitness,
        }
        for i, rec in enumerate(records)
    ]


def completed_evaluations(rows: Iterable[dict]) -> list[int]:
    return [int(r["evaluations"]) for r in rows if str(r["evaluations"]) != "cap-reached"]


def summary_row(algorithm: str, n: int, evaluations: Sequence[int]) -> dict:
    if not evaluations:
        return {"algorithm": algorithm, "n": n, "runs": 0, "mean": "", "std": ""}
    s = summarize(evaluations)
    return {"algorithm": algorithm, "n": n, "runs": s.count, "mean": repr(s.mean), "std": repr(s.std)}


@dataclass(frozen=True)
class ExperimentResult:
    runs_path: Path
    summary_path: Path
    summaries: list[dict]


def _open_csv(path: Path, header: Sequence[str]):
    try:
        fh = open(path, "w", newline="")
    except OSError as e:
        raise OSError(f"cannot write {path}: {e.strerror or e}") from e
    writer = csv.DictWriter(fh, fieldnames=list(header), lineterminator="\n")
    writer.writeheader()
    return fh, writer


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Run every (algorithm, n) cell and write ``runs.csv`` and ``summary.csv``.

    Both files are flushed after each cell, so an interrupted sweep keeps the
    finished cells.
    """
    out = Path(spec.output)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OSError(f"cannot create output directory {out}: {e.strerror or e}") from e
    runs_path, summary_path = out / "runs.csv", out / "summary.csv"
    summaries = []
    runs_fh, runs_w = _open_csv(runs_path, RUN_FIELDS)
    try:
        sum_fh, sum_w = _open_csv(summary_path, SUMMARY_FIELDS)
        try:
            for algorithm, n in spec.cells:
                log.info("cell %s n=%d: %d runs", algorithm, n, spec.runs)
                records = run_cell(spec, algorithm, n)
                rows = run_rows(spec, algorithm, n, records)
                caps = sum(r.cap_reached for r in records)
                if caps:
                    log.warning("cell %s n=%d: %d runs hit the evaluation cap", algorithm, n, caps)
                row = summary_row(algorithm, n, completed_evaluations(rows))
                summaries.append(row)
                runs_w.writerows(rows)
                sum_w.writerow(row)
                runs_fh.flush()
                sum_fh.flush()
        finally:
            sum_fh.close()
    finally:
        runs_fh.close()
    return ExperimentResult(runs_path, summary_path, summaries)


def read_rows(path: str | os.PathLike) -> list[dict]:
    try:
        with open(path, newline="") as fh:
            return list(csv.DictReader(fh))
    except OSError as e:
        raise OSError(f"cannot read {path}: {e.strerror or e}") from e


def select_rows(rows: Iterable[dict], algorithm: str | None = None, n: int | None = None) -> list[dict]:
    return [
        r for r in rows
        if (algorithm is None or r["algorithm"] == algorithm) and (n is None or int(r["n"]) == n)
    ]


@dataclass(frozen=True)
class Comparison:
    summary_a: SampleSummary
    summary_b: SampleSummary
    test: MannWhitneyResult


def compare_samples(evals_a: Sequence[float], evals_b: Sequence[float]) -> Comparison:
    return Comparison(summarize(evals_a), summarize(evals_b), mann_whitney_u(evals_a, evals_b))


def trace_rows(run_id: int, record: RunRecord) -> list[dict]:
    return [
        {"run_id": run_id, "phase": ph.phase, "r0": repr(ph.r0), "b": ph.b, "direction": ph.direction}
        for ph in record.strength_trace or ()
    ]


def top_phase_fraction(record: RunRecord, alpha: float, skip: int = 10) -> float | None:
    """Fraction of phases after the first ``skip`` that ran at ``r0 = 1 - 2 alpha``."""
    trace = record.strength_trace or ()
    later = [ph.r0 for ph in trace[skip:]]
    if not later:
        return None
    top = ctl.strengths(ctl.grid_top(alpha), ctl.grid_top(alpha), alpha)[0]
    return sum(r0 == top for r0 in later) / len(later)


def with_overrides(spec: ExperimentSpec, **overrides) -> ExperimentSpec:
    known = {f.name for f in fields(ExperimentSpec)}
    return replace(spec, **{k: v for k, v in overrides.items() if k in known and v is not None})
