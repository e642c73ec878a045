from __future__ import annotations

import numpy as np
import pytest

from src.model.system import DiscreteSystem, feedthrough_example, validate


def test_feedthrough_example_dimensions() -> None:
    system = feedthrough_example()

    assert (system.nx, system.nu, system.nw, system.ny, system.nz) == (1, 0, 1, 2, 1)
    assert validate(system) == []


def test_matrices_are_read_only(feedthrough_system: DiscreteSystem) -> None:
    with pytest.raises(ValueError):
        feedthrough_system.A[0, 0] = 1.0


def test_r_bar_includes_feedthrough_and_correlation(system_factory) -> None:
    system = system_factory(3)
    expected = (
        system.R
        + system.Hm @ system.Q @ system.Hm.T
        + system.Hm @ system.N
        + system.N.T @ system.Hm.T
    )

    np.testing.assert_allclose(system.R_bar, expected, atol=1e-14)
    assert system.joint_noise_cov.shape == (system.nw + system.nz, system.nw + system.nz)


def test_r_bar_equals_r_without_feedthrough(system_factory) -> None:
    system = system_factory(4, feedthrough=False, correlated=False)

    np.testing.assert_array_equal(system.R_bar, system.R)


def test_validate_reports_dimension_mismatch(feedthrough_system: DiscreteSystem) -> None:
    broken = feedthrough_system.replace(Hm=np.ones((1, 2)))

    issues = validate(broken)

    assert any("Hm" in issue and "dimension mismatch" in issue for issue in issues)


def test_validate_reports_indefinite_joint_covariance(feedthrough_system: DiscreteSystem) -> None:
    # |N| > sqrt(Q R) makes [[Q, N], [N, R]] indefinite even though Q and R are PSD.
    broken = feedthrough_system.replace(N=[[1.0]])

    issues = validate(broken)

    assert any("joint noise covariance" in issue for issue in issues)


@pytest.mark.parametrize(
    "changes, fragment",
    [
        ({"Q": [[-1.0]]}, "Q not PSD"),
        ({"R": [[float("nan")]]}, "non-finite"),
        ({"dt": 0.0}, "dt must be positive"),
    ],
)
def test_validate_flags_bad_fields(feedthrough_system: DiscreteSystem, changes, fragment) -> None:
    issues = validate(feedthrough_system.replace(**changes))

    assert any(fragment in issue for issue in issues)


def test_validate_flags_asymmetric_q(system_factory) -> None:
    system = system_factory(5)
    Q = np.array(system.Q)
    Q[0, 1] += 0.5

    issues = validate(system.replace(Q=Q))

    assert "Q not symmetric" in issues
