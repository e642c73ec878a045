"""End-to-end checks on the feed-through example and random systems."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from src import cli
from src.estimation import filter_tv
from src.estimation.filter_ss import steady_filter
from src.estimation.filter_tv import FilterState, OutputMode
from src.io.frames import read_frames_csv
from src.model.discretize import discretize
from src.model.system import feedthrough_example
from src.simulation.estimators import run_estimators
from src.simulation.evaluate import variance_ratios
from src.simulation.scenario import Scenario, ScenarioKind, simulate

LONG_RUN = 100_000


@pytest.fixture(scope="module")
def example_system():
    return discretize(feedthrough_example(), 0.1)


@pytest.fixture(scope="module")
def nominal_runs(example_system):
    traj = simulate(example_system, Scenario(n_steps=LONG_RUN, seed=42))
    runs = run_estimators(example_system, traj, ["ss_corrected", "ss_legacy"], burn_in=100)
    return traj, runs


def test_corrected_output_variance_matches_analytic_value(example_system, nominal_runs) -> None:
    _, runs = nominal_runs
    steady = steady_filter(example_system)
    P_star = steady.P_star[0, 0]

    analytic = (P_star + 1.0) / (P_star + 1.1) * 0.1
    assert analytic == pytest.approx(0.0910, abs=0.0015)
    assert runs["ss_corrected"].stats.y_err_var[0] == pytest.approx(0.0910, rel=0.05)


def test_legacy_output_error_is_ten_times_larger(nominal_runs) -> None:
    _, runs = nominal_runs
    legacy = runs["ss_legacy"].stats
    corrected = runs["ss_corrected"].stats

    assert 0.85 <= legacy.y_err_var[0] <= 1.15
    assert variance_ratios(legacy, corrected)[0] >= 9.0


def test_unknown_input_channel_variance(nominal_runs) -> None:
    traj, runs = nominal_runs
    legacy = runs["ss_legacy"].stats
    corrected = runs["ss_corrected"].stats

    # The legacy estimate of y(2) = w is zero, so its error variance is the sample variance of w.
    assert legacy.y_err_var[1] == pytest.approx(np.var(traj.W[100:, 0], ddof=1), rel=1e-9)
    assert corrected.y_err_var[1] < 0.2 * legacy.y_err_var[1]


def test_state_estimates_identical_across_output_modes(nominal_runs) -> None:
    _, runs = nominal_runs
    corrected = runs["ss_corrected"].series.x_hat
    legacy = runs["ss_legacy"].series.x_hat

    assert np.max(np.abs(corrected - legacy)) <= 1e-12


def test_innovations_are_white(nominal_runs) -> None:
    _, runs = nominal_runs
    nu = runs["ss_corrected"].series.innovation[:, 0]
    nu = nu - nu.mean()
    bound = 4.0 / np.sqrt(nu.size)

    for lag in range(1, 6):
        rho = np.dot(nu[:-lag], nu[lag:]) / np.dot(nu, nu)
        assert abs(rho) <= bound


def test_time_varying_filter_converges_to_steady_state(example_system) -> None:
    traj = simulate(example_system, Scenario(n_steps=2000, seed=1))
    steady = steady_filter(example_system)
    init = FilterState.initial(example_system, p0_scale=1.0)

    tv_frames = filter_tv.run(example_system, init, traj.Z, traj.U, OutputMode.CORRECTED)
    ss_frames = steady.run(None, traj.Z, traj.U, OutputMode.CORRECTED)

    for tv, ss in zip(tv_frames[200:], ss_frames[200:]):
        np.testing.assert_allclose(tv.x_post, ss.x_post, atol=1e-6)
        np.testing.assert_allclose(tv.y_post, ss.y_post, atol=1e-6)

    state = init
    for _ in range(200):
        state = FilterState(x_prior=state.x_prior, P_prior=filter_tv.riccati_step(example_system, state.P_prior))
    np.testing.assert_allclose(state.P_prior, steady.P_star, atol=1e-8)


@pytest.mark.parametrize("p0_scale", [0.0, 10.0])
def test_covariance_converges_from_any_start(example_system, p0_scale: float) -> None:
    P_star = steady_filter(example_system).P_star
    P = FilterState.initial(example_system, p0_scale=p0_scale).P_prior

    for _ in range(300):
        P = filter_tv.riccati_step(example_system, P)

    np.testing.assert_allclose(P, P_star, rtol=0.0, atol=1e-8)


def test_output_errors_match_predicted_variance(example_system, nominal_runs) -> None:
    traj, runs = nominal_runs
    predicted = np.diag(steady_filter(example_system).var_y)

    errors = (traj.Ytrue - runs["ss_corrected"].series.y_hat)[100:]
    sample = np.var(errors, axis=0, ddof=1)
    standard_error = predicted * np.sqrt(2.0 / (errors.shape[0] - 1))

    assert np.all(np.abs(sample - predicted) <= 5.0 * standard_error)


def test_unknown_input_output_column_is_noise_estimate(nominal_runs) -> None:
    _, runs = nominal_runs

    corrected = runs["ss_corrected"].series
    np.testing.assert_array_equal(corrected.y_hat[:, 1], corrected.w_hat[:, 0])
    assert np.all(runs["ss_legacy"].series.y_hat[:, 1] == 0.0)


def test_random_walk_bias_is_tracked_through_unknown_input(example_system) -> None:
    traj = simulate(
        example_system,
        Scenario(kind=ScenarioKind.RANDOM_WALK_BIAS, n_steps=10_000, seed=42, bias_step_std=0.01),
    )

    runs = run_estimators(example_system, traj, ["ss_corrected", "ss_legacy"], burn_in=100)

    assert not np.any(runs["ss_legacy"].series.w_hat)
    assert runs["ss_corrected"].stats.w_rms <= 0.5 * runs["ss_legacy"].stats.w_rms


def test_degenerate_systems_give_identical_estimators(system_factory) -> None:
    for seed in range(20):
        system = system_factory(500 + seed, feedthrough=False, correlated=False)
        traj = simulate(system, Scenario(n_steps=200, seed=seed))
        steady = steady_filter(system)

        assert np.all(steady.gains.Kg2 == 0.0)
        corrected = steady.run(None, traj.Z, traj.U, OutputMode.CORRECTED)
        legacy = steady.run(None, traj.Z, traj.U, OutputMode.LEGACY)
        for a, b in zip(corrected, legacy):
            np.testing.assert_allclose(a.y_post, b.y_post, rtol=0.0, atol=1e-12)


def test_cli_nominal_run_reproduces_headline_numbers(tmp_path: Path) -> None:
    out = tmp_path / "nominal"

    code = cli.main(
        ["run", "--steps", str(LONG_RUN), "--estimators", "ss_corrected,ss_legacy", "--out", str(out)],
        environ={},
    )

    assert code == 0
    summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
    assert summary["ss_corrected"]["y_err_var"][0] == pytest.approx(0.0910, rel=0.05)
    assert 0.85 <= summary["ss_legacy"]["y_err_var"][0] <= 1.15

    corrected = read_frames_csv(out / "ss_corrected.csv")
    legacy = read_frames_csv(out / "ss_legacy.csv")
    assert np.max(np.abs(corrected["x_hat1"] - legacy["x_hat1"])) <= 1e-12
    np.testing.assert_array_equal(corrected["y_true1"], legacy["y_true1"])
