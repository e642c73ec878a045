"""Time-varying Kalman filter with minimum-variance output estimates.

Each measurement update conditions the prior quantities (state, output,
next state, process noise) on the innovation.  With process noise feeding
the measurement (Hm != 0) or correlated with it (N != 0), the conditional
mean of the process noise is nonzero, so the output estimate picks up the
correction term ``H w_post``.  ``OutputMode.LEGACY`` drops that term and
reproduces the classic ``y = C x_post + D u`` estimate for comparison.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, List, Optional, Sequence, Tuple

import numpy as np

from .gaussian import factorize, solve_right, symmetrize

if TYPE_CHECKING:  # pragma: no cover - type-checking aid only
    from ..model.system import DiscreteSystem

logger = logging.getLogger(__name__)


class OutputMode(str, Enum):
    CORRECTED = "corrected"
    LEGACY = "legacy"


# -----------------------------
# Value types
# -----------------------------

@dataclass(frozen=True)
class FilterState:
    """Prior estimate x_{n|n-1} and its covariance P_{n|n-1}."""

    x_prior: np.ndarray
    P_prior: np.ndarray
    step: int = 0

    @classmethod
    def initial(cls, system: "DiscreteSystem", p0_scale: float = 1.0, x0: Optional[np.ndarray] = None) -> "FilterState":
        if p0_scale < 0:
            raise ValueError(f"p0_scale must be nonnegative, got {p0_scale}")
        x_prior = np.zeros(system.nx) if x0 is None else np.asarray(x0, dtype=float).copy()
        return cls(x_prior=x_prior, P_prior=p0_scale * np.eye(system.nx), step=0)


@dataclass(frozen=True)
class GainSet:
    """Gains of one measurement update (or of the steady state).

    M_AG = A Kg + G Kg2 and M_CH = C Kg + H Kg2.  ``S`` is the innovation
    covariance Cm P Cm^T + R_bar.
    """

    Kg: np.ndarray
    Kg2: np.ndarray
    M_AG: np.ndarray
    M_CH: np.ndarray
    S: np.ndarray
    # Cross-covariances of next state / output with the innovation.
    L_x: np.ndarray
    L_y: np.ndarray


@dataclass(frozen=True)
class EstimateFrame:
    step: int
    mode: OutputMode
    x_post: np.ndarray
    y_post: np.ndarray
    w_post: np.ndarray
    x_next: np.ndarray
    var_y: np.ndarray
    innovation: np.ndarray
    P_post: np.ndarray

    @property
    def var_y_exact(self) -> bool:
        """False in legacy mode, where ``var_y`` is the corrected estimator's variance."""
        return self.mode is OutputMode.CORRECTED

    @property
    def w_hat(self) -> np.ndarray:
        """Unknown-input estimate the output equation of this mode relies on."""
        if self.mode is OutputMode.CORRECTED:
            return self.w_post
        return np.zeros_like(self.w_post)


# -----------------------------
# Covariance algebra
# -----------------------------

def innovation_covariance(system: "DiscreteSystem", P: np.ndarray) -> np.ndarray:
    return symmetrize(system.Cm @ P @ system.Cm.T + system.R_bar)


def gains(system: "DiscreteSystem", P_prior: np.ndarray) -> GainSet:
    """Kg = P Cm^T S^-1 and Kg2 = (Q Hm^T + N) S^-1."""
    P = np.asarray(P_prior, dtype=float)
    S = innovation_covariance(system, P)
    fact = factorize(S, block="S")

    noise_cross = system.Q @ system.Hm.T + system.N
    Kg = solve_right(fact, P @ system.Cm.T)
    Kg2 = solve_right(fact, noise_cross)
    L_x = system.A @ P @ system.Cm.T + system.G @ noise_cross
    L_y = system.C @ P @ system.Cm.T + system.H @ noise_cross
    return GainSet(
        Kg=Kg,
        Kg2=Kg2,
        M_AG=system.A @ Kg + system.G @ Kg2,
        M_CH=system.C @ Kg + system.H @ Kg2,
        S=S,
        L_x=L_x,
        L_y=L_y,
    )


def riccati_step(
    system: "DiscreteSystem",
    P: np.ndarray,
    gain_set: Optional[GainSet] = None,
    *,
    joseph: bool = False,
) -> np.ndarray:
    """P_{n+1|n} from P_{n|n-1}, symmetrized.

    The default is the subtraction form
    (A P A^T + G Q G^T) - L_x S^-1 L_x^T.  ``joseph=True`` propagates the
    prediction error e' = (A - M Cm) e + (G - M Hm) w - M v instead, which
    stays PSD for ill-conditioned problems.
    """
    gs = gain_set if gain_set is not None else gains(system, P)
    if joseph:
        closed = system.A - gs.M_AG @ system.Cm
        noise_map = np.hstack([system.G - gs.M_AG @ system.Hm, -gs.M_AG])
        P_next = closed @ P @ closed.T + noise_map @ system.joint_noise_cov @ noise_map.T
    else:
        P_next = system.A @ P @ system.A.T + system.G @ system.Q @ system.G.T - gs.M_AG @ gs.L_x.T
    return symmetrize(P_next)


def output_variance(system: "DiscreteSystem", P: np.ndarray, gain_set: GainSet) -> np.ndarray:
    """Posterior output covariance (C P C^T + H Q H^T) - L_y S^-1 L_y^T."""
    prior = system.C @ P @ system.C.T + system.H @ system.Q @ system.H.T
    return symmetrize(prior - gain_set.M_CH @ gain_set.L_y.T)


def posterior_state_covariance(P: np.ndarray, gain_set: GainSet) -> np.ndarray:
    return symmetrize(P - gain_set.Kg @ gain_set.S @ gain_set.Kg.T)


def output_gain(system: "DiscreteSystem", gain_set: GainSet, mode: OutputMode) -> np.ndarray:
    """Innovation gain of the output row: M_CH, or C Kg in legacy mode."""
    if OutputMode(mode) is OutputMode.CORRECTED:
        return gain_set.M_CH
    return system.C @ gain_set.Kg


def measurement_update_matrices(
    system: "DiscreteSystem",
    gain_set: GainSet,
    mode: OutputMode = OutputMode.CORRECTED,
) -> Tuple[np.ndarray, np.ndarray]:
    """Block form of one update.

    [x_{n|n}; y_{n|n}; x_{n+1|n}] = Phi [x_{n|n-1}; u_n] + Gamma z_n
    """
    Kg, M_AG = gain_set.Kg, gain_set.M_AG
    M_y = output_gain(system, gain_set, mode)
    Cm, Dm = system.Cm, system.Dm
    Phi = np.block(
        [
            [np.eye(system.nx) - Kg @ Cm, -Kg @ Dm],
            [system.C - M_y @ Cm, system.D - M_y @ Dm],
            [system.A - M_AG @ Cm, system.B - M_AG @ Dm],
        ]
    )
    Gamma = np.vstack([Kg, M_y, M_AG])
    return Phi, Gamma


# -----------------------------
# Filter recursion
# -----------------------------

def _check_vector(value, size: int, name: str) -> np.ndarray:
    vector = np.atleast_1d(np.asarray(value, dtype=float))
    if vector.shape != (size,):
        raise ValueError(f"{name} must have shape ({size},), got {vector.shape}")
    if not np.all(np.isfinite(vector)):
        raise ValueError(f"{name} contains non-finite entries")
    return vector


def update(
    system: "DiscreteSystem",
    fs: FilterState,
    z: np.ndarray,
    u: Optional[np.ndarray] = None,
    mode: OutputMode = OutputMode.CORRECTED,
    *,
    joseph: bool = False,
) -> Tuple[EstimateFrame, FilterState]:
    """Incorporate measurement ``z`` and propagate to the next prior."""
    mode = OutputMode(mode)
    z = _check_vector(z, system.nz, "z")
    u = np.zeros(system.nu) if u is None else _check_vector(u, system.nu, "u")
    x_prior = _check_vector(fs.x_prior, system.nx, "x_prior")
    P = np.asarray(fs.P_prior, dtype=float)
    if P.shape != (system.nx, system.nx) or not np.all(np.isfinite(P)):
        raise ValueError(f"P_prior must be a finite {system.nx}x{system.nx} matrix")

    gs = gains(system, P)
    innovation = z - (system.Cm @ x_prior + system.Dm @ u)

    x_post = x_prior + gs.Kg @ innovation
    w_post = gs.Kg2 @ innovation
    y_post = system.C @ x_post + system.D @ u
    if mode is OutputMode.CORRECTED:
        y_post = y_post + system.H @ w_post
    x_next = system.A @ x_prior + system.B @ u + gs.M_AG @ innovation

    frame = EstimateFrame(
        step=fs.step,
        mode=mode,
        x_post=x_post,
        y_post=y_post,
        w_post=w_post,
        x_next=x_next,
        var_y=output_variance(system, P, gs),
        innovation=innovation,
        P_post=posterior_state_covariance(P, gs),
    )
    next_state = FilterState(x_prior=x_next, P_prior=riccati_step(system, P, gs, joseph=joseph), step=fs.step + 1)
    return frame, next_state


def run(
    system: "DiscreteSystem",
    init: FilterState,
    Z: Sequence[np.ndarray],
    U: Optional[Sequence[np.ndarray]] = None,
    mode: OutputMode = OutputMode.CORRECTED,
    *,
    joseph: bool = False,
) -> List[EstimateFrame]:
    """Fold :func:`update` over the measurement sequence; frame k uses z[k]."""
    if U is None:
        U = np.zeros((len(Z), system.nu))
    if len(Z) != len(U):
        raise ValueError(f"length mismatch: {len(Z)} measurements but {len(U)} inputs")

    mode = OutputMode(mode)
    if mode is OutputMode.LEGACY:
        logger.warning("legacy mode: var_y reports the corrected posterior variance")

    frames: List[EstimateFrame] = []
    state = init
    for z, u in zip(Z, U):
        frame, state = update(system, state, z, u, mode, joseph=joseph)
        frames.append(frame)
    logger.debug("time-varying filter processed %d steps (%s)", len(frames), mode.value)
    return frames


__all__ = [
    "EstimateFrame",
    "FilterState",
    "GainSet",
    "OutputMode",
    "gains",
    "innovation_covariance",
    "measurement_update_matrices",
    "output_gain",
    "output_variance",
    "posterior_state_covariance",
    "riccati_step",
    "run",
    "update",
]
