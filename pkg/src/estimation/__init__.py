"""Estimation public API."""

from __future__ import annotations

from .filter_ss import (
    RiccatiConvergenceError,
    RiccatiSolution,
    SteadyFilter,
    SteadyTrace,
    build,
    solve_riccati,
    steady_filter,
)
from .filter_tv import EstimateFrame, FilterState, GainSet, OutputMode, gains, run, update
from .gaussian import (
    Gaussian,
    JointPartition,
    NotPositiveSemidefinite,
    SingularInnovation,
    condition,
    psd_factor,
    sample_joint_noise,
)

__all__ = [
    "EstimateFrame",
    "FilterState",
    "GainSet",
    "Gaussian",
    "JointPartition",
    "NotPositiveSemidefinite",
    "OutputMode",
    "RiccatiConvergenceError",
    "RiccatiSolution",
    "SingularInnovation",
    "SteadyFilter",
    "SteadyTrace",
    "build",
    "condition",
    "gains",
    "psd_factor",
    "run",
    "sample_joint_noise",
    "solve_riccati",
    "steady_filter",
    "update",
]
