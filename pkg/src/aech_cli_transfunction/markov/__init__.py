"""Markov operators, transfunctions and transport plans."""

from .models import MARKOV_TOLERANCE, MarkovMatrix, MarkovReport, RelationReport, TransportPlan
from .operator import (
    EXHAUSTIVE_LIMIT,
    b_mu,
    b_mu_inv,
    markov_from_plan,
    markov_suite,
    markov_to_transfunction,
    metric_cost,
    mk_cost,
    plan_from_markov,
    plan_relation_report,
    read_cost_csv,
    rebase,
    transfunction_to_markov,
)

__all__ = [
    "EXHAUSTIVE_LIMIT",
    "MARKOV_TOLERANCE",
    "MarkovMatrix",
    "MarkovReport",
    "RelationReport",
    "TransportPlan",
    "b_mu",
    "b_mu_inv",
    "markov_from_plan",
    "markov_suite",
    "markov_to_transfunction",
    "metric_cost",
    "mk_cost",
    "plan_from_markov",
    "plan_relation_report",
    "read_cost_csv",
    "rebase",
    "transfunction_to_markov",
]
