"""Pytest configuration: project import path and shared system fixtures."""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Callable

import numpy as np
import pytest

_PROJECT_ROOT = Path(__file__).resolve().parents[1]

# Only the project root: putting src/ itself on the path would let src/io
# shadow the standard library io module.
if str(_PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(_PROJECT_ROOT))

from src.model.discretize import discretize  # noqa: E402
from src.model.system import DiscreteSystem, feedthrough_example  # noqa: E402

EXAMPLE_DT = 0.1


def make_random_system(
    seed: int,
    nx: int = 3,
    nw: int = 2,
    nz: int = 2,
    ny: int = 2,
    nu: int = 1,
    *,
    feedthrough: bool = True,
    correlated: bool = True,
    radius: float = 0.9,
) -> DiscreteSystem:
    """Random stable system with a positive definite joint noise covariance."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((nx, nx))
    A *= radius / max(np.max(np.abs(np.linalg.eigvals(A))), 1e-9)

    L = rng.standard_normal((nw + nz, nw + nz))
    joint = L @ L.T + 0.1 * np.eye(nw + nz)
    N = joint[:nw, nw:] if correlated else np.zeros((nw, nz))

    return DiscreteSystem(
        A=A,
        B=rng.standard_normal((nx, nu)),
        G=rng.standard_normal((nx, nw)),
        C=rng.standard_normal((ny, nx)),
        D=rng.standard_normal((ny, nu)),
        H=rng.standard_normal((ny, nw)),
        Cm=rng.standard_normal((nz, nx)),
        Dm=rng.standard_normal((nz, nu)),
        Hm=rng.standard_normal((nz, nw)) if feedthrough else np.zeros((nz, nw)),
        Q=joint[:nw, :nw],
        R=joint[nw:, nw:],
        N=N,
        dt=1.0,
    )


@pytest.fixture
def feedthrough_system() -> DiscreteSystem:
    """The feed-through example sampled with Euler at dt = 0.1."""
    return discretize(feedthrough_example(), EXAMPLE_DT)


@pytest.fixture
def system_factory() -> Callable[..., DiscreteSystem]:
    return make_random_system
