"""Coupled homophily appraisal / influence opinion dynamics (C++ core)."""

from ._core import (
    DomainViolation,
    appraisal_update,
    chernoff_sample_size,
    classify_equilibrium,
    generic_initial,
    influence_from_appraisal,
    is_socially_balanced_rows,
    is_socially_balanced_triads,
    local_stability_probe,
    modulus_consensus,
    modulus_sign_consensus,
    opinion_update,
    predicted_limit_appraisal,
    run_experiment,
    sign_of,
    simulate,
    single_issue_closed_form,
    step,
    validate_opinion_matrix,
)

__all__ = [
    "DomainViolation",
    "appraisal_update",
    "chernoff_sample_size",
    "classify_equilibrium",
    "generic_initial",
    "influence_from_appraisal",
    "is_socially_balanced_rows",
    "is_socially_balanced_triads",
    "local_stability_probe",
    "modulus_consensus",
    "modulus_sign_consensus",
    "opinion_update",
    "predicted_limit_appraisal",
    "run_experiment",
    "sign_of",
    "simulate",
    "single_issue_closed_form",
    "step",
    "validate_opinion_matrix",
]
