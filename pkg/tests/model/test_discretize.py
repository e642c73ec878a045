from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.linalg import expm

from src.model.discretize import DiscretizationError, DiscretizationMethod, discretize
from src.model.system import ContinuousSystem, feedthrough_example


def test_euler_matches_hand_computed_example() -> None:
    system = discretize(feedthrough_example(), 0.1)

    assert system.A[0, 0] == pytest.approx(0.99)
    assert system.G[0, 0] == pytest.approx(0.2)
    assert system.dt == 0.1


def test_noise_and_output_terms_are_carried_over() -> None:
    csys = feedthrough_example()

    system = discretize(csys, 0.1, DiscretizationMethod.ZERO_ORDER_HOLD)

    for name in ("C", "D", "H", "Cm", "Dm", "Hm", "Q", "R", "N"):
        np.testing.assert_array_equal(getattr(system, name), getattr(csys, name))


def test_zero_order_hold_scalar_closed_form() -> None:
    system = discretize(feedthrough_example(), 0.1, "zoh")

    a_d = math.exp(-0.01)
    assert system.A[0, 0] == pytest.approx(a_d, rel=1e-12)
    # G_d = A^-1 (A_d - 1) G for a scalar invertible A.
    assert system.G[0, 0] == pytest.approx((a_d - 1.0) / -0.1 * 2.0, rel=1e-10)


def test_zero_order_hold_matrix_inputs() -> None:
    A = np.array([[0.0, 1.0], [-2.0, -0.5]])
    B = np.array([[0.0], [1.0]])
    G = np.array([[0.3, 0.0], [0.0, 1.0]])
    csys = ContinuousSystem(
        A=A,
        B=B,
        G=G,
        C=np.eye(2),
        D=np.zeros((2, 1)),
        H=np.zeros((2, 2)),
        Cm=[[1.0, 0.0]],
        Dm=[[0.0]],
        Hm=[[0.0, 0.0]],
        Q=np.eye(2),
        R=[[0.1]],
        N=np.zeros((2, 1)),
    )

    system = discretize(csys, 0.2, DiscretizationMethod.ZERO_ORDER_HOLD)

    A_d = expm(A * 0.2)
    inverse_term = np.linalg.solve(A, A_d - np.eye(2))
    np.testing.assert_allclose(system.A, A_d, atol=1e-12)
    np.testing.assert_allclose(system.B, inverse_term @ B, atol=1e-10)
    np.testing.assert_allclose(system.G, inverse_term @ G, atol=1e-10)


def test_zoh_and_euler_agree_for_small_steps() -> None:
    euler = discretize(feedthrough_example(), 1e-4)
    zoh = discretize(feedthrough_example(), 1e-4, DiscretizationMethod.ZERO_ORDER_HOLD)

    np.testing.assert_allclose(euler.A, zoh.A, atol=1e-8)
    np.testing.assert_allclose(euler.G, zoh.G, atol=1e-8)


@pytest.mark.parametrize("dt", [0.0, -0.1, float("nan")])
def test_nonpositive_dt_is_rejected(dt: float) -> None:
    with pytest.raises(DiscretizationError):
        discretize(feedthrough_example(), dt)


def test_unknown_method_is_rejected() -> None:
    with pytest.raises(ValueError):
        discretize(feedthrough_example(), 0.1, "tustin")


def test_euler_error_shrinks_quadratically_with_step() -> None:
    csys = feedthrough_example().replace(A=[[-0.8]], G=[[1.5]])

    def euler_error(dt: float) -> np.ndarray:
        euler = discretize(csys, dt)
        zoh = discretize(csys, dt, DiscretizationMethod.ZERO_ORDER_HOLD)
        return np.array([abs(euler.A[0, 0] - zoh.A[0, 0]), abs(euler.G[0, 0] - zoh.G[0, 0])])

    ratios = euler_error(0.1) / euler_error(0.05)

    assert np.all((ratios > 3.5) & (ratios < 4.5))
