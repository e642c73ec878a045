"""Ground-truth trajectories for the nominal and random-walk-bias experiments."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from ..estimation.gaussian import derive_seeds, sample_joint_noise
from ..model.system import DiscreteSystem

logger = logging.getLogger(__name__)

DEFAULT_BIAS_STEP_STD = 0.01


class ScenarioKind(str, Enum):
    NOMINAL = "nominal"
    RANDOM_WALK_BIAS = "randomwalk"


@dataclass(frozen=True)
class Scenario:
    """What to simulate.

    ``bias_step_std`` is the std-dev of the per-step random-walk increment
    added to w; it only matters for ``RANDOM_WALK_BIAS``.  ``u_profile`` is
    an (n_steps x nu) known-input sequence, all-zero when omitted.
    """

    kind: ScenarioKind = ScenarioKind.NOMINAL
    n_steps: int = 10_000
    seed: int = 42
    bias_step_std: float = DEFAULT_BIAS_STEP_STD
    u_profile: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ScenarioKind(self.kind))
        if self.n_steps <= 0:
            raise ValueError(f"n_steps must be positive, got {self.n_steps}")
        if not np.isfinite(self.bias_step_std) or self.bias_step_std < 0:
            raise ValueError(f"bias_step_std must be nonnegative, got {self.bias_step_std}")

    def inputs(self, nu: int) -> np.ndarray:
        if self.u_profile is None:
            return np.zeros((self.n_steps, nu))
        U = np.asarray(self.u_profile, dtype=float).reshape(self.n_steps, nu)
        if not np.all(np.isfinite(U)):
            raise ValueError("u_profile contains non-finite entries")
        return U


@dataclass(frozen=True)
class Trajectory:
    """Realized signals; row k holds step k."""

    X: np.ndarray
    Ytrue: np.ndarray
    Z: np.ndarray
    W: np.ndarray
    U: np.ndarray
    V: np.ndarray
    bias: np.ndarray

    @property
    def n_steps(self) -> int:
        return self.X.shape[0]

    def times(self, dt: float) -> np.ndarray:
        return np.arange(self.n_steps) * dt


def simulate(system: DiscreteSystem, sc: Scenario, x0: Optional[np.ndarray] = None) -> Trajectory:
    """Propagate the model from ``x0`` (default 0) with seeded correlated noise.

    The scenario seed is split into a noise stream and a bias stream so that
    the white-noise realization of a seed is the same in both scenarios.
    """
    noise_seed, bias_seed = derive_seeds(sc.seed, 2)
    W, V = sample_joint_noise(system.Q, system.R, system.N, sc.n_steps, noise_seed)

    bias = np.zeros_like(W)
    if sc.kind is ScenarioKind.RANDOM_WALK_BIAS and sc.bias_step_std > 0:
        increments = np.random.default_rng(bias_seed).normal(0.0, sc.bias_step_std, size=W.shape)
        bias = np.cumsum(increments, axis=0)
        W = W + bias

    U = sc.inputs(system.nu)
    X = np.empty((sc.n_steps, system.nx))
    x = np.zeros(system.nx) if x0 is None else np.asarray(x0, dtype=float)
    drive = U @ system.B.T + W @ system.G.T
    for k in range(sc.n_steps):
        X[k] = x
        x = system.A @ x + drive[k]

    Ytrue = X @ system.C.T + U @ system.D.T + W @ system.H.T
    Z = X @ system.Cm.T + U @ system.Dm.T + W @ system.Hm.T + V
    logger.info("simulated %d steps (%s, seed=%d)", sc.n_steps, sc.kind.value, sc.seed)
    return Trajectory(X=X, Ytrue=Ytrue, Z=Z, W=W, U=U, V=V, bias=bias)


__all__ = ["DEFAULT_BIAS_STEP_STD", "Scenario", "ScenarioKind", "Trajectory", "simulate"]
