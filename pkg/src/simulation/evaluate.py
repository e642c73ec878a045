"""Estimate-error statistics for simulated runs."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Sequence, Union

import numpy as np

from ..estimation.filter_ss import SteadyTrace
from ..estimation.filter_tv import EstimateFrame
from .scenario import Trajectory

DEFAULT_BURN_IN = 100


@dataclass(frozen=True)
class ErrorStats:
    y_err_var: np.ndarray
    y_rms: np.ndarray
    x_rms: np.ndarray
    w_rms: float
    samples: int

    def as_dict(self) -> Dict[str, Any]:
        return {
            "y_err_var": self.y_err_var.tolist(),
            "y_rms": self.y_rms.tolist(),
            "x_rms": self.x_rms.tolist(),
            "w_rms": self.w_rms,
            "samples": self.samples,
        }


@dataclass(frozen=True)
class EstimateSeries:
    """Frames stacked into arrays, one row per step."""

    x_hat: np.ndarray
    y_hat: np.ndarray
    w_hat: np.ndarray
    innovation: np.ndarray

    @classmethod
    def from_frames(cls, frames: Sequence[EstimateFrame]) -> "EstimateSeries":
        if not frames:
            raise ValueError("no frames to stack")
        return cls(
            x_hat=np.array([frame.x_post for frame in frames]),
            y_hat=np.array([frame.y_post for frame in frames]),
            w_hat=np.array([frame.w_hat for frame in frames]),
            innovation=np.array([frame.innovation for frame in frames]),
        )

    @classmethod
    def from_trace(cls, trace: SteadyTrace) -> "EstimateSeries":
        if not len(trace):
            raise ValueError("no frames to stack")
        return cls(x_hat=trace.x_post, y_hat=trace.y_post, w_hat=trace.w_hat, innovation=trace.innovation)

    @classmethod
    def of(cls, estimates: "Estimates") -> "EstimateSeries":
        if isinstance(estimates, EstimateSeries):
            return estimates
        if isinstance(estimates, SteadyTrace):
            return cls.from_trace(estimates)
        return cls.from_frames(estimates)


Estimates = Union[Sequence[EstimateFrame], SteadyTrace, EstimateSeries]


def _rms(errors: np.ndarray) -> np.ndarray:
    return np.sqrt(np.mean(errors**2, axis=0))


def evaluate(
    traj: Trajectory,
    estimates: Estimates,
    burn_in: int = DEFAULT_BURN_IN,
) -> ErrorStats:
    """Error statistics over the steps after ``burn_in``.

    Error at step k is truth minus estimate.  Variances remove the mean and
    use the n-1 divisor; RMS values do not remove the mean.
    """
    series = EstimateSeries.of(estimates)
    if series.y_hat.shape[0] != traj.n_steps:
        raise ValueError(f"length mismatch: {series.y_hat.shape[0]} frames for {traj.n_steps} steps")
    if burn_in < 0:
        raise ValueError(f"burn_in must be nonnegative, got {burn_in}")
    if traj.n_steps - burn_in < 2:
        raise ValueError(f"need at least 2 steps after burn-in, have {traj.n_steps - burn_in}")

    window = slice(burn_in, None)
    y_err = (traj.Ytrue - series.y_hat)[window]
    x_err = (traj.X - series.x_hat)[window]
    w_err = (traj.W - series.w_hat)[window]

    return ErrorStats(
        y_err_var=np.var(y_err, axis=0, ddof=1),
        y_rms=_rms(y_err),
        x_rms=_rms(x_err),
        w_rms=float(np.sqrt(np.mean(w_err**2))) if w_err.size else 0.0,
        samples=y_err.shape[0],
    )


def _safe_div(num: float, denom: float) -> float:
    if denom:
        return num / denom
    return float("inf") if num else 1.0


def variance_ratios(reference: ErrorStats, candidate: ErrorStats) -> List[float]:
    """Per-output ratio reference / candidate of the error variances."""
    return [_safe_div(float(ref), float(cand)) for ref, cand in zip(reference.y_err_var, candidate.y_err_var)]


def _format_vector(values: Sequence[float]) -> str:
    return "[" + ", ".join(f"{value:.4g}" for value in values) + "]"


def format_report(stats: Mapping[str, ErrorStats], legends: Mapping[str, str]) -> str:
    """Build a human-readable report of per-estimator statistics."""

    lines: List[str] = []
    for name, result in stats.items():
        lines.append(f"{name} ({legends.get(name, name)}):")
        lines.append(f"  y_err_var: {_format_vector(result.y_err_var)}")
        lines.append(f"  y_rms    : {_format_vector(result.y_rms)}")
        lines.append(f"  x_rms    : {_format_vector(result.x_rms)}")
        lines.append(f"  w_rms    : {result.w_rms:.4g}")
        lines.append(f"  samples  : {result.samples}")
    return "\n".join(lines)


__all__ = [
    "DEFAULT_BURN_IN",
    "ErrorStats",
    "EstimateSeries",
    "evaluate",
    "format_report",
    "variance_ratios",
]
