"""Exact causal-effect computations on discrete Bayesian networks."""

from ._core import (
    BayesNet,
    ConfoundError,
    InfeasibleEndpoints,
    MathError,
    ModelError,
    ParseError,
    PositivityViolation,
    PreconditionError,
    ValidationError,
    ace,
    adjusted_estimate,
    backdoor_admissible,
    classify_interaction,
    conditioning_bias,
    correlation_feasible,
    d_separated,
    decompose_common_cause,
    do,
    interventional_table,
    load_model,
    parse_model,
    query,
    sample_csv,
    scan_csv,
    scenario,
    select_confounders,
    template_parameters,
    third_correlation_interval,
    unadjusted_estimate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
