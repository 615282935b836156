"""Sensitivity analysis and localized re-solves for convex min-cost network flow."""

from ._localflow import (
    Cost,
    Error,
    InvalidInput,
    KilledWalk,
    NoGuarantee,
    NonContractiveWalk,
    NumericalFailure,
    Problem,
    Sensitivity,
    Solution,
    Walk,
    cycle,
    derivative,
    finite_perturbation,
    grid,
    interlacing_bound,
    killed_walk,
    laplacian_pinv,
    local_resolve,
    measure,
    path,
    pgd,
    random_balanced_flow,
    random_regular,
    sensitivity,
    solve,
    spectral_report,
    sweep,
    tune,
    verify,
    walk,
)

__all__ = [
    "Cost",
    "Error",
    "InvalidInput",
    "KilledWalk",
    "NoGuarantee",
    "NonContractiveWalk",
    "NumericalFailure",
    "Problem",
    "Sensitivity",
    "Solution",
    "Walk",
    "cycle",
    "derivative",
    "finite_perturbation",
    "grid",
    "interlacing_bound",
    "killed_walk",
    "laplacian_pinv",
    "local_resolve",
    "measure",
    "path",
    "pgd",
    "random_balanced_flow",
    "random_regular",
    "sensitivity",
    "solve",
    "spectral_report",
    "sweep",
    "tune",
    "verify",
    "walk",
]

__version__ = "0.1.0"
