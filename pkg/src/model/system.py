"""State-space system types with direct process-noise feedthrough.

    x[n+1] = A x[n] + B u[n] + G w[n]
    y[n]   = C x[n] + D u[n] + H w[n]
    z[n]   = Cm x[n] + Dm u[n] + Hm w[n] + v[n]

with E(w w^T) = Q, E(v v^T) = R and E(w v^T) = N.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any, Dict, List, Tuple

import numpy as np

from ..estimation.gaussian import PSD_TOLERANCE, min_eigenvalue

MATRIX_NAMES: Tuple[str, ...] = ("A", "B", "G", "C", "D", "H", "Cm", "Dm", "Hm", "Q", "R", "N")

ValidationReport = List[str]


def _frozen_matrix(value: Any) -> np.ndarray:
    matrix = np.array(value, dtype=float)
    if matrix.ndim == 0:
        matrix = matrix.reshape(1, 1)
    elif matrix.ndim == 1:
        matrix = matrix.reshape(1, -1)
    matrix.setflags(write=False)
    return matrix


@dataclass(frozen=True, eq=False)
class _StateSpace:
    A: np.ndarray
    B: np.ndarray
    G: np.ndarray
    C: np.ndarray
    D: np.ndarray
    H: np.ndarray
    Cm: np.ndarray
    Dm: np.ndarray
    Hm: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    N: np.ndarray

    def __post_init__(self) -> None:
        for name in MATRIX_NAMES:
            object.__setattr__(self, name, _frozen_matrix(getattr(self, name)))

    @property
    def nx(self) -> int:
        return self.A.shape[0]

    @property
    def nu(self) -> int:
        return self.B.shape[1]

    @property
    def nw(self) -> int:
        return self.G.shape[1]

    @property
    def ny(self) -> int:
        return self.C.shape[0]

    @property
    def nz(self) -> int:
        return self.Cm.shape[0]

    @property
    def R_bar(self) -> np.ndarray:
        """Measurement covariance seen by the filter: R + Hm Q Hm^T + Hm N + N^T Hm^T."""
        cross = self.Hm @ self.N
        return self.R + self.Hm @ self.Q @ self.Hm.T + cross + cross.T

    @property
    def joint_noise_cov(self) -> np.ndarray:
        return np.block([[self.Q, self.N], [self.N.T, self.R]])

    def matrices(self) -> Dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in MATRIX_NAMES}

    def expected_shapes(self) -> Dict[str, Tuple[int, int]]:
        nx, nu, nw, ny, nz = self.nx, self.nu, self.nw, self.ny, self.nz
        return {
            "A": (nx, nx),
            "B": (nx, nu),
            "G": (nx, nw),
            "C": (ny, nx),
            "D": (ny, nu),
            "H": (ny, nw),
            "Cm": (nz, nx),
            "Dm": (nz, nu),
            "Hm": (nz, nw),
            "Q": (nw, nw),
            "R": (nz, nz),
            "N": (nw, nz),
        }

    def replace(self, **changes: Any):
        return replace(self, **changes)


@dataclass(frozen=True, eq=False)
class DiscreteSystem(_StateSpace):
    """Sampled system; ``dt`` is metadata only."""

    dt: float = 1.0


@dataclass(frozen=True, eq=False)
class ContinuousSystem(_StateSpace):
    """Continuous-time dynamics (A, B, G); output and noise terms as sampled."""


def feedthrough_example() -> ContinuousSystem:
    """Scalar plant whose process noise feeds both outputs and the measurement.

    y(1) is measured through z with noise v, y(2) = w is the unknown input
    exposed as an auxiliary output.
    """
    return ContinuousSystem(
        A=[[-0.1]],
        B=np.zeros((1, 0)),
        G=[[2.0]],
        C=[[1.0], [0.0]],
        D=np.zeros((2, 0)),
        H=[[1.0], [1.0]],
        Cm=[[1.0]],
        Dm=np.zeros((1, 0)),
        Hm=[[1.0]],
        Q=[[1.0]],
        R=[[0.1]],
        N=[[0.0]],
    )


# -----------------------------
# Validation
# -----------------------------

def _check_dimensions(system: _StateSpace) -> ValidationReport:
    issues: ValidationReport = []
    expected = system.expected_shapes()
    for name in MATRIX_NAMES:
        actual = getattr(system, name).shape
        if actual != expected[name]:
            issues.append(
                f"dimension mismatch: {name} has shape {actual}, expected {expected[name]}"
            )
    return issues


def _check_covariance(name: str, matrix: np.ndarray) -> ValidationReport:
    issues: ValidationReport = []
    if not np.allclose(matrix, matrix.T, rtol=0.0, atol=1e-12 * (1.0 + np.max(np.abs(matrix), initial=0.0))):
        issues.append(f"{name} not symmetric")
    if min_eigenvalue(matrix) < PSD_TOLERANCE:
        issues.append(f"{name} not PSD")
    return issues


def validate(system: _StateSpace) -> ValidationReport:
    """Return the list of violated invariants; an empty list means valid."""
    issues: ValidationReport = []

    non_finite = [name for name in MATRIX_NAMES if not np.all(np.isfinite(getattr(system, name)))]
    if non_finite:
        issues.append(f"non-finite entries in {', '.join(non_finite)}")
        return issues

    issues.extend(_check_dimensions(system))
    if isinstance(system, DiscreteSystem) and not (np.isfinite(system.dt) and system.dt > 0):
        issues.append(f"dt must be positive, got {system.dt}")
    if issues:
        # Covariance checks need consistent shapes.
        return issues

    issues.extend(_check_covariance("Q", system.Q))
    issues.extend(_check_covariance("R", system.R))
    if min_eigenvalue(system.joint_noise_cov) < PSD_TOLERANCE:
        issues.append("joint noise covariance [[Q, N], [N^T, R]] not PSD")
    R_bar = system.R_bar
    if not np.allclose(R_bar, R_bar.T, rtol=0.0, atol=1e-12 * (1.0 + np.max(np.abs(R_bar), initial=0.0))):
        issues.append("R_bar not symmetric")
    return issues


def system_kind(system: _StateSpace) -> str:
    return "continuous" if isinstance(system, ContinuousSystem) else "discrete"


__all__ = [
    "ContinuousSystem",
    "DiscreteSystem",
    "MATRIX_NAMES",
    "ValidationReport",
    "feedthrough_example",
    "system_kind",
    "validate",
]
