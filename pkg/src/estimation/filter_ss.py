"""Steady-state filter: Riccati fixed point and the resulting LTI estimator."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, List, Optional, Sequence, Tuple

import numpy as np

from .filter_tv import (
    EstimateFrame,
    GainSet,
    OutputMode,
    gains,
    output_gain,
    output_variance,
    posterior_state_covariance,
    riccati_step,
)
from .gaussian import symmetrize

if TYPE_CHECKING:  # pragma: no cover - type-checking aid only
    from ..model.system import DiscreteSystem

logger = logging.getLogger(__name__)

RICCATI_TOL = 1e-12
RICCATI_MAX_ITER = 100_000
RESIDUAL_RTOL = 1e-9


@dataclass(frozen=True)
class RiccatiSolution:
    P: np.ndarray
    iterations: int
    residual: float
    converged: bool
    step_norms: Tuple[float, ...] = field(repr=False, default=())


class RiccatiConvergenceError(RuntimeError):
    """Fixed-point iteration stopped at ``max_iter`` without converging."""

    def __init__(self, solution: RiccatiSolution) -> None:
        super().__init__(
            f"Riccati iteration did not converge in {solution.iterations} iterations "
            f"(last step {solution.step_norms[-1] if solution.step_norms else float('nan'):.3e}, "
            f"residual {solution.residual:.3e})"
        )
        self.solution = solution


def _max_norm(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(matrix), initial=0.0))


def riccati_residual(system: "DiscreteSystem", P: np.ndarray) -> float:
    """Relative fixed-point residual |rhs(P) - P|_max / (1 + |P|_max)."""
    return _max_norm(riccati_step(system, P) - P) / (1.0 + _max_norm(P))


def solve_riccati(
    system: "DiscreteSystem",
    P0: Optional[np.ndarray] = None,
    tol: float = RICCATI_TOL,
    max_iter: int = RICCATI_MAX_ITER,
    *,
    raise_on_failure: bool = True,
) -> RiccatiSolution:
    """Iterate the Riccati difference equation from ``P0`` (default 0).

    Stops once |P_{k+1} - P_k|_max <= tol.  Each iterate is symmetrized.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be at least 1, got {max_iter}")

    P = np.zeros((system.nx, system.nx)) if P0 is None else symmetrize(np.asarray(P0, dtype=float))
    step_norms: List[float] = []
    converged = False
    for _ in range(max_iter):
        P_next = riccati_step(system, P)
        step = _max_norm(P_next - P)
        step_norms.append(step)
        P = P_next
        if step <= tol:
            converged = True
            break

    solution = RiccatiSolution(
        P=P,
        iterations=len(step_norms),
        residual=riccati_residual(system, P),
        converged=converged,
        step_norms=tuple(step_norms),
    )
    if converged:
        logger.debug("Riccati converged in %d iterations, residual %.3e", solution.iterations, solution.residual)
    elif raise_on_failure:
        raise RiccatiConvergenceError(solution)
    else:
        logger.warning("Riccati did not converge in %d iterations", solution.iterations)
    return solution


def spectral_radius(matrix: np.ndarray) -> float:
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(matrix))))


@dataclass(frozen=True)
class SteadyTrace:
    """Steady-filter outputs stacked into arrays, one row per step."""

    mode: OutputMode
    x_post: np.ndarray
    y_post: np.ndarray
    w_post: np.ndarray
    x_next: np.ndarray
    innovation: np.ndarray

    def __len__(self) -> int:
        return self.innovation.shape[0]

    @property
    def w_hat(self) -> np.ndarray:
        if self.mode is OutputMode.CORRECTED:
            return self.w_post
        return np.zeros_like(self.w_post)


@dataclass(frozen=True)
class SteadyFilter:
    """Linear time-invariant estimator built from a Riccati fixed point.

        x_{n+1|n} = A_cl x_{n|n-1} + M_AG z_n + B_cl u_n
        x_{n|n}   = (I - Kg Cm) x_{n|n-1} + Kg z_n - Kg Dm u_n
        y_{n|n}   = (C - M Cm) x_{n|n-1} + M z_n + (D - M Dm) u_n

    with M = M_CH (corrected) or C Kg (legacy).  The output row is evaluated
    as C x_{n|n} + D u_n + H w_{n|n}, the same arithmetic as the time-varying
    filter, so an output with C = 0 and H = I reproduces w_{n|n} bit for bit.
    """

    system: "DiscreteSystem"
    P_star: np.ndarray
    gains: GainSet
    A_cl: np.ndarray
    B_cl: np.ndarray
    var_y: np.ndarray
    P_post: np.ndarray
    spectral_radius: float

    def output_map(self, mode: OutputMode) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Coefficients (of x_prior, z, u) of the output row."""
        M_y = output_gain(self.system, self.gains, mode)
        return (
            self.system.C - M_y @ self.system.Cm,
            M_y,
            self.system.D - M_y @ self.system.Dm,
        )

    def predictor(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Coefficients (of x_prior, z, u) of the one-step predictor."""
        return self.A_cl, self.gains.M_AG, self.B_cl

    def _outputs(self, x_post: np.ndarray, w_post: np.ndarray, u: np.ndarray, mode: OutputMode) -> np.ndarray:
        # Row-vector convention: works for single steps and stacked arrays.
        sys = self.system
        y_post = x_post @ sys.C.T + u @ sys.D.T
        if mode is OutputMode.CORRECTED:
            y_post = y_post + w_post @ sys.H.T
        return y_post

    def step(
        self,
        state: np.ndarray,
        z: np.ndarray,
        u: Optional[np.ndarray] = None,
        mode: OutputMode = OutputMode.CORRECTED,
        *,
        index: int = 0,
    ) -> Tuple[EstimateFrame, np.ndarray]:
        mode = OutputMode(mode)
        sys = self.system
        x = np.asarray(state, dtype=float)
        z = np.atleast_1d(np.asarray(z, dtype=float))
        u = np.zeros(sys.nu) if u is None else np.atleast_1d(np.asarray(u, dtype=float))
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(z)) and np.all(np.isfinite(u))):
            raise ValueError("steady filter inputs contain non-finite entries")

        innovation = z - (sys.Cm @ x + sys.Dm @ u)
        x_post = x + self.gains.Kg @ innovation
        w_post = self.gains.Kg2 @ innovation
        x_next = self.A_cl @ x + self.gains.M_AG @ z + self.B_cl @ u
        frame = EstimateFrame(
            step=index,
            mode=mode,
            x_post=x_post,
            y_post=self._outputs(x_post, w_post, u, mode),
            w_post=w_post,
            x_next=x_next,
            var_y=self.var_y,
            innovation=innovation,
            P_post=self.P_post,
        )
        return frame, x_next

    def trace(
        self,
        x0: Optional[np.ndarray],
        Z: Sequence[np.ndarray],
        U: Optional[Sequence[np.ndarray]] = None,
        mode: OutputMode = OutputMode.CORRECTED,
    ) -> SteadyTrace:
        """Run over a whole measurement sequence without per-step frames.

        Only the predictor recursion is sequential; every other row is an
        affine map of (x_prior, z, u) applied to the stacked arrays.
        """
        sys = self.system
        Z = np.asarray(Z, dtype=float).reshape(len(Z), sys.nz)
        U = np.zeros((Z.shape[0], sys.nu)) if U is None else np.asarray(U, dtype=float).reshape(len(U), sys.nu)
        if Z.shape[0] != U.shape[0]:
            raise ValueError(f"length mismatch: {Z.shape[0]} measurements but {U.shape[0]} inputs")
        x = np.zeros(sys.nx) if x0 is None else np.asarray(x0, dtype=float)
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(Z)) and np.all(np.isfinite(U))):
            raise ValueError("steady filter inputs contain non-finite entries")

        mode = OutputMode(mode)
        if mode is OutputMode.LEGACY:
            logger.warning("legacy mode: var_y reports the corrected posterior variance")
        n_steps = Z.shape[0]
        drive = Z @ self.gains.M_AG.T + U @ self.B_cl.T
        X_prior = np.empty((n_steps + 1, sys.nx))
        X_prior[0] = x
        for index in range(n_steps):
            X_prior[index + 1] = self.A_cl @ X_prior[index] + drive[index]

        innovation = Z - (X_prior[:-1] @ sys.Cm.T + U @ sys.Dm.T)
        x_post = X_prior[:-1] + innovation @ self.gains.Kg.T
        w_post = innovation @ self.gains.Kg2.T
        return SteadyTrace(
            mode=mode,
            x_post=x_post,
            y_post=self._outputs(x_post, w_post, U, mode),
            w_post=w_post,
            x_next=X_prior[1:],
            innovation=innovation,
        )

    def run(
        self,
        x0: Optional[np.ndarray],
        Z: Sequence[np.ndarray],
        U: Optional[Sequence[np.ndarray]] = None,
        mode: OutputMode = OutputMode.CORRECTED,
    ) -> List[EstimateFrame]:
        mode = OutputMode(mode)
        trace = self.trace(x0, Z, U, mode)
        frames = [
            EstimateFrame(
                step=index,
                mode=mode,
                x_post=trace.x_post[index],
                y_post=trace.y_post[index],
                w_post=trace.w_post[index],
                x_next=trace.x_next[index],
                var_y=self.var_y,
                innovation=trace.innovation[index],
                P_post=self.P_post,
            )
            for index in range(len(trace))
        ]
        logger.debug("steady filter processed %d steps (%s)", len(frames), mode.value)
        return frames


def build(system: "DiscreteSystem", P_star: np.ndarray, residual_rtol: float = RESIDUAL_RTOL) -> SteadyFilter:
    """Precompute the constant maps of the steady-state estimator."""
    P = symmetrize(np.asarray(P_star, dtype=float))
    residual = riccati_residual(system, P)
    if residual > residual_rtol:
        raise ValueError(f"P_star is not a Riccati fixed point (relative residual {residual:.3e})")

    gs = gains(system, P)
    A_cl = system.A - gs.M_AG @ system.Cm
    radius = spectral_radius(A_cl)
    if radius >= 1.0:
        logger.warning("closed-loop spectral radius %.6f >= 1; steady filter is not stable", radius)

    return SteadyFilter(
        system=system,
        P_star=P,
        gains=gs,
        A_cl=A_cl,
        B_cl=system.B - gs.M_AG @ system.Dm,
        var_y=output_variance(system, P, gs),
        P_post=posterior_state_covariance(P, gs),
        spectral_radius=radius,
    )


def steady_filter(system: "DiscreteSystem", P0: Optional[np.ndarray] = None) -> SteadyFilter:
    """Solve the Riccati equation and build the filter in one call."""
    return build(system, solve_riccati(system, P0).P)


__all__ = [
    "RESIDUAL_RTOL",
    "RICCATI_MAX_ITER",
    "RICCATI_TOL",
    "RiccatiConvergenceError",
    "RiccatiSolution",
    "SteadyFilter",
    "SteadyTrace",
    "build",
    "riccati_residual",
    "solve_riccati",
    "spectral_radius",
    "steady_filter",
]
