#!/usr/bin/env python3
"""Re-run the nominal and random-walk-bias experiments end to end.

1. Runs ``feedkal.py run`` and ``feedkal.py compare`` for each scenario in a
   subprocess, writing artifacts under ``<out>/<scenario>/``.
2. Optionally runs the pytest suite afterwards.
"""

from __future__ import annotations

import argparse
import subprocess
import sys
from pathlib import Path
from typing import List, Optional

ROOT = Path(__file__).resolve().parents[1]
ENTRY = ROOT / "feedkal.py"
SCENARIOS = ("nominal", "randomwalk")
DEFAULT_STEPS = 100_000


def _ensure_paths() -> None:
    if not ENTRY.exists():
        raise FileNotFoundError(f"entry script not found at {ENTRY}")


def _run_cli(command: str, scenario: str, out_dir: Path, steps: int, seed: int) -> int:
    cmd = [
        sys.executable,
        str(ENTRY),
        command,
        "--scenario",
        scenario,
        "--steps",
        str(steps),
        "--seed",
        str(seed),
        "--out",
        str(out_dir / scenario),
    ]
    print(f"[{scenario}] feedkal {command}")
    return subprocess.run(cmd, cwd=str(ROOT)).returncode


def _run_tests(pytest_args: List[str]) -> int:
    cmd = [sys.executable, "-m", "pytest"] + pytest_args
    print("[tests] Running pytest")
    return subprocess.run(cmd, cwd=str(ROOT)).returncode


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Reproduce the estimator comparison experiments")
    parser.add_argument("--out", type=Path, default=ROOT / "results", help="Artifact root (default: results/)")
    parser.add_argument("--steps", type=int, default=DEFAULT_STEPS, help="Simulated steps per scenario")
    parser.add_argument("--seed", type=int, default=42, help="Seed shared by both scenarios")
    parser.add_argument("--tests", action="store_true", help="Run pytest after the experiments")
    parser.add_argument(
        "--pytest-args",
        nargs=argparse.REMAINDER,
        help="Extra arguments to pass to pytest (use after --)",
    )
    args = parser.parse_args(argv)

    extra_pytest_args: List[str] = []
    if args.pytest_args:
        extra_pytest_args = args.pytest_args[1:] if args.pytest_args[0] == "--" else args.pytest_args

    _ensure_paths()

    for scenario in SCENARIOS:
        for command in ("run", "compare"):
            code = _run_cli(command, scenario, args.out, args.steps, args.seed)
            if code != 0:
                print(f"[{scenario}] {command} exited with code {code}")
                return code

    if not args.tests:
        return 0
    exit_code = _run_tests(extra_pytest_args)
    if exit_code == 0:
        print("[tests] Pytest completed successfully")
    else:
        print(f"[tests] Pytest exited with code {exit_code}")
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
