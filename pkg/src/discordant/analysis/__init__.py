"""Executable versions of the analytical tools: cycle drift, LP bound, star formulas, graph parameters."""

from .cycle import (
    CurvatureChecks,
    DriftResult,
    DriftScanReport,
    EdgeDrift,
    RunDecomposition,
    drift_scan,
    potential,
    psi,
    psi_drift,
    run_decomposition,
    runs_of,
    sqrt_curvature_checks,
)
from .lp import LPInstance, LPSolution, cycle_lp_instance, cycle_lp_limit, lp_bound
from .params import conductance, nu_param, psi_param
from .star import (
    dstar_recolour_probability,
    dstar_run_prob,
    dstar_up_bound,
    dstar_up_series,
    simulate_star_loops,
    star_exit_probability,
    star_exit_probability_solve,
    star_loop_expectations,
    star_pull_run_prob,
    star_rho,
)

__all__ = [
    "CurvatureChecks",
    "DriftResult",
    "DriftScanReport",
    "EdgeDrift",
    "LPInstance",
    "LPSolution",
    "RunDecomposition",
    "conductance",
    "cycle_lp_instance",
    "cycle_lp_limit",
    "drift_scan",
    "dstar_recolour_probability",
    "dstar_run_prob",
    "dstar_up_bound",
    "dstar_up_series",
    "lp_bound",
    "nu_param",
    "potential",
    "psi",
    "psi_drift",
    "psi_param",
    "run_decomposition",
    "runs_of",
    "simulate_star_loops",
    "sqrt_curvature_checks",
    "star_exit_probability",
    "star_exit_probability_solve",
    "star_loop_expectations",
    "star_pull_run_prob",
    "star_rho",
]
