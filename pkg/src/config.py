"""Run configuration for the command-line harness."""

from __future__ import annotations

import argparse
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Tuple

from .model.discretize import DiscretizationMethod
from .simulation.estimators import ESTIMATORS, parse_selection
from .simulation.evaluate import DEFAULT_BURN_IN
from .simulation.scenario import DEFAULT_BIAS_STEP_STD, ScenarioKind

SEED_ENV_VAR = "FEEDKAL_SEED"
DEFAULT_SEED = 42
DEFAULT_STEPS = 10_000
DEFAULT_DT = 0.1
DEFAULT_P0_SCALE = 1.0
DEFAULT_OUT_DIR = Path("results")


class ConfigError(ValueError):
    """Raised for invalid command-line or environment configuration."""


def _check_seed(seed: int, source: str) -> int:
    # numpy seed sequences only take nonnegative entropy.
    if seed < 0:
        raise ConfigError(f"{source} must be a nonnegative integer, got {seed}")
    return seed


def resolve_seed(cli_seed: Optional[int], environ: Mapping[str, str]) -> int:
    """``--seed`` wins, then ``FEEDKAL_SEED``, then the default."""
    if cli_seed is not None:
        return _check_seed(cli_seed, "--seed")
    raw = environ.get(SEED_ENV_VAR)
    if raw is None or not raw.strip():
        return DEFAULT_SEED
    try:
        seed = int(raw.strip())
    except ValueError as exc:
        raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from exc
    return _check_seed(seed, SEED_ENV_VAR)


def _positive(value: float, name: str) -> float:
    if not (math.isfinite(value) and value > 0):
        raise ConfigError(f"{name} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class RunConfig:
    system_path: Optional[Path] = None
    scenario: ScenarioKind = ScenarioKind.NOMINAL
    n_steps: int = DEFAULT_STEPS
    seed: int = DEFAULT_SEED
    bias_step_std: float = DEFAULT_BIAS_STEP_STD
    dt: Optional[float] = None
    method: DiscretizationMethod = DiscretizationMethod.EULER
    estimators: Tuple[str, ...] = tuple(ESTIMATORS)
    p0_scale: float = DEFAULT_P0_SCALE
    out_dir: Path = DEFAULT_OUT_DIR
    burn_in: int = DEFAULT_BURN_IN

    def __post_init__(self) -> None:
        _check_seed(self.seed, "seed")
        if self.n_steps <= 0:
            raise ConfigError(f"--steps must be positive, got {self.n_steps}")
        if self.burn_in < 0:
            raise ConfigError(f"--burn-in must be nonnegative, got {self.burn_in}")
        if self.n_steps - self.burn_in < 2:
            raise ConfigError(f"--steps ({self.n_steps}) must exceed --burn-in ({self.burn_in}) by at least 2")
        if not (math.isfinite(self.bias_step_std) and self.bias_step_std >= 0):
            raise ConfigError(f"--bias-std must be nonnegative, got {self.bias_step_std}")
        if not (math.isfinite(self.p0_scale) and self.p0_scale >= 0):
            raise ConfigError(f"--p0-scale must be nonnegative, got {self.p0_scale}")
        if self.dt is not None:
            _positive(self.dt, "--dt")
        if not self.estimators:
            raise ConfigError("select at least one estimator")

    @classmethod
    def from_namespace(cls, args: argparse.Namespace, environ: Optional[Mapping[str, str]] = None) -> "RunConfig":
        environ = os.environ if environ is None else environ
        try:
            estimators = parse_selection(args.estimators.split(","))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return cls(
            system_path=args.system,
            scenario=ScenarioKind(args.scenario),
            n_steps=args.steps,
            seed=resolve_seed(args.seed, environ),
            bias_step_std=args.bias_std,
            dt=args.dt,
            method=DiscretizationMethod(args.disc),
            estimators=estimators,
            p0_scale=args.p0_scale,
            out_dir=args.out,
            burn_in=args.burn_in,
        )


__all__ = [
    "ConfigError",
    "DEFAULT_DT",
    "DEFAULT_OUT_DIR",
    "DEFAULT_P0_SCALE",
    "DEFAULT_SEED",
    "DEFAULT_STEPS",
    "RunConfig",
    "SEED_ENV_VAR",
    "resolve_seed",
]
