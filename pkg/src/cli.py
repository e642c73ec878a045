"""Command-line harness: Riccati report, estimator runs and variance comparison.

Exit codes: 0 success, 1 input error, 2 numerical failure (Riccati
non-convergence or a singular innovation covariance).
"""

from __future__ import annotations

import argparse
import logging
import os
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .config import DEFAULT_DT, DEFAULT_OUT_DIR, DEFAULT_P0_SCALE, DEFAULT_STEPS, ConfigError, RunConfig
from .estimation.filter_ss import RiccatiConvergenceError, build, solve_riccati
from .estimation.filter_tv import OutputMode, gains
from .estimation.gaussian import SingularInnovation
from .io.frames import ensure_output_dir, write_frames_csv, write_json
from .io.plots import write_plot_script
from .model.discretize import DiscretizationMethod, discretize
from .model.loader import load_system
from .model.system import DiscreteSystem, feedthrough_example, system_kind, validate
from .simulation.estimators import ESTIMATORS, EstimatorRun, run_estimators
from .simulation.evaluate import DEFAULT_BURN_IN, format_report, variance_ratios
from .simulation.scenario import DEFAULT_BIAS_STEP_STD, Scenario, ScenarioKind, Trajectory, simulate

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2

SUMMARY_NAME = "summary.json"
LEGACY_ESTIMATOR = "ss_legacy"


# ---------------------------------------------------------------------------
# System loading
# ---------------------------------------------------------------------------


def load_discrete_system(config: RunConfig) -> DiscreteSystem:
    """Load (or build) the system, discretizing continuous-time models."""
    if config.system_path is None:
        system, file_dt, source = feedthrough_example(), None, "built-in feed-through example"
    else:
        spec = load_system(config.system_path)
        system, file_dt, source = spec.system, spec.dt, str(config.system_path)
    logger.info("Loaded %s system from %s", system_kind(system), source)

    if isinstance(system, DiscreteSystem):
        if config.dt is not None and config.dt != system.dt:
            logger.warning("--dt %g ignored for discrete system with dt=%g", config.dt, system.dt)
    else:
        dt = config.dt if config.dt is not None else (file_dt if file_dt is not None else DEFAULT_DT)
        system = discretize(system, dt, config.method)
        logger.info("Discretized with %s, dt=%g", config.method.value, dt)

    issues = validate(system)
    if issues:
        raise ValueError("invalid system: " + "; ".join(issues))
    return system


def _format_matrix(matrix: np.ndarray) -> str:
    return np.array2string(np.asarray(matrix), precision=10, separator=", ", max_line_width=120)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_riccati(config: RunConfig) -> int:
    """Solve the steady-state Riccati equation and print the report."""
    system = load_discrete_system(config)
    solution = solve_riccati(system, raise_on_failure=False)

    print(f"P_star =\n{_format_matrix(solution.P)}")
    print(f"iterations = {solution.iterations}")
    print(f"residual = {solution.residual:.3e}")
    if not solution.converged:
        logger.error("Riccati iteration did not converge in %d iterations", solution.iterations)
        return EXIT_NUMERICAL

    gs = gains(system, solution.P)
    steady = build(system, solution.P)
    print(f"Kg =\n{_format_matrix(gs.Kg)}")
    print(f"Kg2 =\n{_format_matrix(gs.Kg2)}")
    print(f"var_y =\n{_format_matrix(steady.var_y)}")
    print(f"spectral_radius(A_cl) = {steady.spectral_radius:.6f}")
    return EXIT_OK


def _simulate_and_estimate(config: RunConfig) -> Tuple[DiscreteSystem, Trajectory, Dict[str, EstimatorRun]]:
    system = load_discrete_system(config)
    scenario = Scenario(
        kind=config.scenario,
        n_steps=config.n_steps,
        seed=config.seed,
        bias_step_std=config.bias_step_std,
    )
    traj = simulate(system, scenario)
    runs = run_estimators(
        system,
        traj,
        config.estimators,
        p0_scale=config.p0_scale,
        burn_in=config.burn_in,
    )
    return system, traj, runs


def summary_payload(runs: Mapping[str, EstimatorRun]) -> Dict[str, dict]:
    payload: Dict[str, dict] = {}
    for name, run in runs.items():
        entry = {"legend": run.spec.legend}
        entry.update(run.stats.as_dict())
        payload[name] = entry
    return payload


def cmd_run(config: RunConfig) -> int:
    """Simulate once, run the selected estimators, write CSV/JSON/plot artifacts."""
    system, traj, runs = _simulate_and_estimate(config)
    out_dir = ensure_output_dir(config.out_dir)

    for name, run in runs.items():
        path = out_dir / f"{name}.csv"
        write_frames_csv(path, traj, run.series, system.dt)
        logger.info("Wrote %d rows to %s", traj.n_steps, path)

    summary_path = out_dir / SUMMARY_NAME
    write_json(summary_path, summary_payload(runs))
    logger.info("Wrote summary to %s", summary_path)

    legends = {name: run.spec.legend for name, run in runs.items()}
    script = write_plot_script(out_dir, legends, config.scenario.value)
    logger.info("Wrote plot script to %s", script)

    print(format_report({name: run.stats for name, run in runs.items()}, legends))
    return EXIT_OK


def _check_compare_selection(selection: Sequence[str]) -> List[str]:
    corrected = [name for name in selection if ESTIMATORS[name].mode is OutputMode.CORRECTED]
    if LEGACY_ESTIMATOR not in selection or not corrected:
        raise ConfigError(f"compare needs {LEGACY_ESTIMATOR} and at least one corrected estimator")
    return corrected


def format_ratio_table(runs: Mapping[str, EstimatorRun], corrected: Sequence[str]) -> str:
    """Rows are outputs, columns are legacy/corrected error-variance ratios."""
    legacy = runs[LEGACY_ESTIMATOR]
    ny = legacy.stats.y_err_var.shape[0]
    header = ["output", f"var({legacy.spec.legend})"]
    for name in corrected:
        header.extend([f"var({runs[name].spec.legend})", f"ratio({runs[name].spec.legend})"])

    ratios = {name: variance_ratios(legacy.stats, runs[name].stats) for name in corrected}
    lines = ["  ".join(f"{cell:>14}" for cell in header)]
    for index in range(ny):
        cells = [f"y({index + 1})", f"{legacy.stats.y_err_var[index]:.6g}"]
        for name in corrected:
            cells.extend([f"{runs[name].stats.y_err_var[index]:.6g}", f"{ratios[name][index]:.4g}"])
        lines.append("  ".join(f"{cell:>14}" for cell in cells))
    return "\n".join(lines)


def cmd_compare(config: RunConfig) -> int:
    """Run all selected estimators on one realization and print variance ratios."""
    corrected = _check_compare_selection(config.estimators)
    _, _, runs = _simulate_and_estimate(config)
    print(format_ratio_table(runs, corrected))
    return EXIT_OK


COMMANDS = {
    "riccati": cmd_riccati,
    "run": cmd_run,
    "compare": cmd_compare,
}


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="feedkal",
        description="Kalman filtering with minimum-variance output estimates under noise feed-through",
    )
    parser.add_argument("command", choices=sorted(COMMANDS), help="What to do")
    parser.add_argument("--system", type=Path, default=None, help="System JSON file (default: built-in example)")
    parser.add_argument(
        "--scenario",
        default=ScenarioKind.NOMINAL.value,
        choices=[kind.value for kind in ScenarioKind],
        help="Simulation scenario",
    )
    parser.add_argument("--steps", type=int, default=DEFAULT_STEPS, help="Number of simulated steps")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed (falls back to FEEDKAL_SEED, then 42)")
    parser.add_argument("--dt", type=float, default=None, help=f"Sample time for continuous systems (default {DEFAULT_DT})")
    parser.add_argument(
        "--disc",
        default=DiscretizationMethod.EULER.value,
        choices=[method.value for method in DiscretizationMethod],
        help="Discretization method for continuous systems",
    )
    parser.add_argument(
        "--estimators",
        default=",".join(ESTIMATORS),
        help=f"Comma-separated subset of {', '.join(ESTIMATORS)}",
    )
    parser.add_argument("--out", type=Path, default=DEFAULT_OUT_DIR, help="Output directory for run artifacts")
    parser.add_argument("--p0-scale", type=float, default=DEFAULT_P0_SCALE, help="Initial covariance P0 = scale * I")
    parser.add_argument(
        "--bias-std",
        type=float,
        default=DEFAULT_BIAS_STEP_STD,
        help="Random-walk bias increment std-dev",
    )
    parser.add_argument("--burn-in", type=int, default=DEFAULT_BURN_IN, help="Steps skipped by error statistics")
    parser.add_argument(
        "--log-level",
        default="INFO",
        choices=["CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"],
        help="Logging verbosity",
    )
    return parser


def main(argv: Optional[Sequence[str]] = None, environ: Optional[Mapping[str, str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; keep 2 for numerical failures.
        return EXIT_INPUT if exc.code else EXIT_OK

    logging.basicConfig(level=getattr(logging, args.log_level.upper()), format="%(levelname)s %(message)s")

    try:
        config = RunConfig.from_namespace(args, os.environ if environ is None else environ)
        return COMMANDS[args.command](config)
    except (RiccatiConvergenceError, SingularInnovation) as exc:
        logger.error("%s", exc)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        logger.error("%s", exc)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover - CLI entry point
    raise SystemExit(main())
