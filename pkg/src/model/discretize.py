"""Continuous-to-discrete conversion of feedthrough systems."""

from __future__ import annotations

import logging
from enum import Enum

import numpy as np
from scipy.linalg import expm

from .system import ContinuousSystem, DiscreteSystem

logger = logging.getLogger(__name__)


class DiscretizationMethod(str, Enum):
    EULER = "euler"
    ZERO_ORDER_HOLD = "zoh"


class DiscretizationError(ValueError):
    """Raised for a nonpositive step or a non-finite matrix exponential."""


def _euler(csys: ContinuousSystem, dt: float):
    identity = np.eye(csys.nx)
    return identity + csys.A * dt, csys.B * dt, csys.G * dt


def _zero_order_hold(csys: ContinuousSystem, dt: float):
    nx, nu, nw = csys.nx, csys.nu, csys.nw
    inputs = nu + nw

    # M = [A  B  G]      exp(M dt) = [A_d  B_d  G_d]
    #     [0  0  0]                  [ 0     I    ]
    augmented = np.zeros((nx + inputs, nx + inputs))
    augmented[:nx, :nx] = csys.A
    augmented[:nx, nx : nx + nu] = csys.B
    augmented[:nx, nx + nu :] = csys.G
    phi = expm(augmented * dt)
    if not np.all(np.isfinite(phi)):
        raise DiscretizationError(f"matrix exponential has non-finite entries for dt={dt}")
    return phi[:nx, :nx], phi[:nx, nx : nx + nu], phi[:nx, nx + nu :]


def discretize(
    csys: ContinuousSystem,
    dt: float,
    method: DiscretizationMethod = DiscretizationMethod.EULER,
) -> DiscreteSystem:
    """Sample ``csys`` with period ``dt``.

    Only the dynamics (A, B, G) are converted.  Output and measurement maps
    and the noise covariances Q, R, N are carried over unchanged and treated
    as the covariances of the sampled white noises.
    """
    if not (np.isfinite(dt) and dt > 0):
        raise DiscretizationError(f"dt must be positive, got {dt}")
    method = DiscretizationMethod(method)

    if method is DiscretizationMethod.EULER:
        A_d, B_d, G_d = _euler(csys, dt)
    else:
        A_d, B_d, G_d = _zero_order_hold(csys, dt)

    logger.debug("discretized %dx%d system with %s, dt=%g", csys.nx, csys.nx, method.value, dt)
    return DiscreteSystem(
        A=A_d,
        B=B_d,
        G=G_d,
        C=csys.C,
        D=csys.D,
        H=csys.H,
        Cm=csys.Cm,
        Dm=csys.Dm,
        Hm=csys.Hm,
        Q=csys.Q,
        R=csys.R,
        N=csys.N,
        dt=float(dt),
    )


__all__ = ["DiscretizationError", "DiscretizationMethod", "discretize"]
