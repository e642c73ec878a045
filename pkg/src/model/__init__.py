"""System model public API."""

from __future__ import annotations

from .discretize import DiscretizationError, DiscretizationMethod, discretize
from .loader import SystemFileError, SystemSpec, load_system, parse_system, system_to_dict
from .system import ContinuousSystem, DiscreteSystem, ValidationReport, feedthrough_example, validate

__all__ = [
    "ContinuousSystem",
    "DiscreteSystem",
    "DiscretizationError",
    "DiscretizationMethod",
    "SystemFileError",
    "SystemSpec",
    "ValidationReport",
    "discretize",
    "feedthrough_example",
    "load_system",
    "parse_system",
    "system_to_dict",
    "validate",
]
