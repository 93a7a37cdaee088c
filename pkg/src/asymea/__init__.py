"""(1+1) EA with standard, static asymmetric and self-adjusting asymmetric mutation on OneMax_a."""

from .bitstring import BitString, apply_flips, hamming, random_uniform
from .controller import (
    ControllerState,
    current_pair,
    initial_state,
    phase_boundary_update,
    record_outcome,
)
from .ea import RunConfig, RunRecord, run, run_batch
from .fitness import BitProfile, Target, classify, evaluate, is_optimum, parse_target
from .mutation import ProbabilityPair, asymmetric_mutate, standard_mutate, static_pair
from .oracle import exact_success_probability, lemma1_check, mc_success_probability
from .stats import SampleSummary, mann_whitney_u, summarize

__all__ = [
    "BitProfile", "BitString", "ControllerState", "ProbabilityPair", "RunConfig", "RunRecord",
    "SampleSummary", "Target", "apply_flips", "asymmetric_mutate", "classify", "current_pair",
    "evaluate", "exact_success_probability", "hamming", "initial_state", "is_optimum",
    "lemma1_check", "mann_whitney_u", "mc_success_probability", "parse_target",
    "phase_boundary_update", "random_uniform", "record_outcome", "run", "run_batch",
    "standard_mutate", "static_pair", "summarize",
]
