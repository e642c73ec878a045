"""Simulation and evaluation public API."""

from __future__ import annotations

from .estimators import ESTIMATORS, LEGENDS, EstimatorRun, parse_selection, run_estimators
from .evaluate import ErrorStats, EstimateSeries, evaluate, format_report, variance_ratios
from .scenario import Scenario, ScenarioKind, Trajectory, simulate

__all__ = [
    "ESTIMATORS",
    "LEGENDS",
    "ErrorStats",
    "EstimateSeries",
    "EstimatorRun",
    "Scenario",
    "ScenarioKind",
    "Trajectory",
    "evaluate",
    "format_report",
    "parse_selection",
    "run_estimators",
    "simulate",
    "variance_ratios",
]
