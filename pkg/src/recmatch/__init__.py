"""Reciprocal recommendation policies for two-sided matching markets."""

from .assign import (
    BACKEND,
    PartialMatching,
    PermutationMatrix,
    max_weight_matching,
    max_weight_permutation,
)
from .baselines import RankingList, iter_lp_policy, naive_policy, prod_policy
from .datagen import SynthSpec, synth_instance
from .exam import ExaminationFunction, examination_value
from .fw import SolveTrace, SolverConfig, fw_round, gradient, solve
from .model import (
    EnvyReport,
    Instance,
    OpportunityView,
    Policy,
    cross_utility,
    envy_audit,
    epsilon_similarity,
    log_nsw,
    match_probability,
    social_welfare,
    uniform_policy,
    utility,
    validate_policy,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "EnvyReport",
    "ExaminationFunction",
    "Instance",
    "OpportunityView",
    "PartialMatching",
    "PermutationMatrix",
    "Policy",
    "RankingList",
    "SolveTrace",
    "SolverConfig",
    "SynthSpec",
    "cross_utility",
    "envy_audit",
    "epsilon_similarity",
    "examination_value",
    "fw_round",
    "gradient",
    "iter_lp_policy",
    "log_nsw",
    "match_probability",
    "max_weight_matching",
    "max_weight_permutation",
    "naive_policy",
    "prod_policy",
    "social_welfare",
    "solve",
    "synth_instance",
    "uniform_policy",
    "utility",
    "validate_policy",
    "__version__",
]
