#!/usr/bin/env python3
"""Entry point for the feedkal command-line harness.

    python feedkal.py riccati
    python feedkal.py run --scenario randomwalk --out results/bias
    python feedkal.py compare --steps 100000
"""
from __future__ import annotations

from src.cli import main

if __name__ == "__main__":  # pragma: no cover - CLI entry point
    raise SystemExit(main())
