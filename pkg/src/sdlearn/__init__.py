"""Query-efficient serial dictatorship for one-sided matching."""

from .instance import (
    ActionSequence,
    Instance,
    InstanceError,
    Matching,
    execute_sequence,
    pareto_dominates,
    pick,
    social_welfare,
    validate,
)
from .learner import BudgetExceeded, InconsistentState, SolveResult, solve
from .matching import ProxyGraph, max_weight_matching_restricted, max_weight_perfect_matching, mwpo
from .oracle import Oracle, QueryResponse

__all__ = [
    "ActionSequence", "Instance", "InstanceError", "Matching", "execute_sequence", "pareto_dominates",
    "pick", "social_welfare", "validate", "BudgetExceeded", "InconsistentState", "SolveResult", "solve",
    "ProxyGraph", "max_weight_matching_restricted", "max_weight_perfect_matching", "mwpo", "Oracle",
    "QueryResponse",
]
