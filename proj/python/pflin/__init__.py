"""Power flow linearization toolkit: AC oracle, linear models, fitting."""

from ._core import (
    AcSolution,
    BranchFlow,
    LinearSolution,
    ModelCoefficients,
    Network,
    PflinError,
    __version__,
    case_to_json,
    filtered_mape,
    fit_coefficients,
    generate_hourly_cases,
    improvement,
    load_case,
    parse_case,
    solve_ac,
    solve_dc,
    solve_lac,
)

__all__ = [
    "AcSolution",
    "BranchFlow",
    "LinearSolution",
    "ModelCoefficients",
    "Network",
    "PflinError",
    "__version__",
    "case_to_json",
    "filtered_mape",
    "fit_coefficients",
    "generate_hourly_cases",
    "improvement",
    "load_case",
    "parse_case",
    "solve_ac",
    "solve_dc",
    "solve_lac",
]
