"""Discordant voting on graphs: simulation, exact solvers and analysis tools."""

from .chains import ChainSpec, HitProfile, hit_profile, pull_chain, push_chain
from .configuration import BLUE, RED, ColoringSpec, Configuration, coloring_opinions, init_configuration
from .exact import (
    SingularSystemError,
    StateSpaceError,
    brute_force_ET,
    brute_force_vector,
    lumped_kn_ET,
    lumped_star_ET,
)
from .graph import FAMILIES, Graph, generate
from .kernels import BACKEND
from .mc import EstimateStats, SweepRow, estimate_ET, sweep
from .protocols import Protocol, TrialResult, run_to_consensus, step, step_distribution

__all__ = [
    "BACKEND",
    "BLUE",
    "ChainSpec",
    "ColoringSpec",
    "Configuration",
    "EstimateStats",
    "FAMILIES",
    "Graph",
    "HitProfile",
    "Protocol",
    "RED",
    "SingularSystemError",
    "StateSpaceError",
    "SweepRow",
    "TrialResult",
    "brute_force_ET",
    "brute_force_vector",
    "coloring_opinions",
    "estimate_ET",
    "generate",
    "hit_profile",
    "init_configuration",
    "lumped_kn_ET",
    "lumped_star_ET",
    "pull_chain",
    "push_chain",
    "run_to_consensus",
    "step",
    "step_distribution",
    "sweep",
]
