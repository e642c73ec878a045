"""JSON system-definition files.

A system file is a JSON object with one row-major 2-D array per matrix
("A", "B", "G", "C", "D", "H", "Cm", "Dm", "Hm", "Q", "R", "N") plus "dt".
``"continuous": true`` marks A, B, G as continuous-time.  Missing B, D, Dm
and N default to zero matrices of the implied shape.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import numpy as np

from .system import MATRIX_NAMES, ContinuousSystem, DiscreteSystem

REQUIRED_KEYS = ("A", "G", "C", "H", "Cm", "Hm", "Q", "R")

AnySystem = Union[DiscreteSystem, ContinuousSystem]


class SystemFileError(ValueError):
    """Raised when a system file cannot be read or parsed."""


@dataclass(frozen=True)
class SystemSpec:
    """A parsed system file; ``dt`` is ``None`` when the file gives none."""

    system: AnySystem
    dt: Optional[float]
    source: Optional[Path] = None

    @property
    def continuous(self) -> bool:
        return isinstance(self.system, ContinuousSystem)


def _coerce_matrix(value: Any, key: str) -> np.ndarray:
    """Accept a 2-D list of numbers, or a bare number as a 1x1 matrix."""
    if isinstance(value, bool):
        raise SystemFileError(f"{key}: expected a number or 2-D array, got a boolean")
    if isinstance(value, (int, float)):
        return np.array([[float(value)]])
    if not isinstance(value, list):
        raise SystemFileError(f"{key}: expected a 2-D array, got {type(value).__name__}")
    if value and not all(isinstance(row, list) for row in value):
        raise SystemFileError(f"{key}: expected a 2-D array (list of rows)")

    widths = {len(row) for row in value}
    if len(widths) > 1:
        raise SystemFileError(f"{key}: rows have different lengths {sorted(widths)}")
    for row in value:
        for entry in row:
            if isinstance(entry, bool) or not isinstance(entry, (int, float)):
                raise SystemFileError(f"{key}: non-numeric entry {entry!r}")
    if not value:
        return np.zeros((0, 0))
    return np.array(value, dtype=float).reshape(len(value), widths.pop())


def _implied_nu(matrices: Mapping[str, np.ndarray]) -> int:
    for key in ("B", "D", "Dm"):
        if key in matrices:
            return matrices[key].shape[1]
    return 0


def parse_system(obj: Mapping[str, Any]) -> SystemSpec:
    """Build a system from a decoded system-file mapping."""
    if not isinstance(obj, Mapping):
        raise SystemFileError(f"system file must hold a JSON object, got {type(obj).__name__}")

    missing = [key for key in REQUIRED_KEYS if key not in obj]
    if missing:
        raise SystemFileError(f"missing required keys: {', '.join(missing)}")

    matrices: Dict[str, np.ndarray] = {
        key: _coerce_matrix(obj[key], key) for key in MATRIX_NAMES if key in obj
    }

    nx = matrices["A"].shape[0]
    nw = matrices["G"].shape[1]
    ny = matrices["C"].shape[0]
    nz = matrices["Cm"].shape[0]
    nu = _implied_nu(matrices)
    matrices.setdefault("B", np.zeros((nx, nu)))
    matrices.setdefault("D", np.zeros((ny, nu)))
    matrices.setdefault("Dm", np.zeros((nz, nu)))
    matrices.setdefault("N", np.zeros((nw, nz)))

    dt: Optional[float] = None
    if "dt" in obj:
        raw_dt = obj["dt"]
        if isinstance(raw_dt, bool) or not isinstance(raw_dt, (int, float)) or not math.isfinite(raw_dt) or raw_dt <= 0:
            raise SystemFileError(f"dt must be a positive number, got {raw_dt!r}")
        dt = float(raw_dt)

    continuous = obj.get("continuous", False)
    if not isinstance(continuous, bool):
        raise SystemFileError(f"continuous must be true or false, got {continuous!r}")

    if continuous:
        return SystemSpec(system=ContinuousSystem(**matrices), dt=dt)
    if dt is None:
        raise SystemFileError("discrete system files must give a positive dt")
    return SystemSpec(system=DiscreteSystem(**matrices, dt=dt), dt=dt)


def load_system(path: Path) -> SystemSpec:
    """Read and parse the system file at ``path``."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SystemFileError(f"cannot read system file {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SystemFileError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc

    spec = parse_system(obj)
    return SystemSpec(system=spec.system, dt=spec.dt, source=Path(path))


def system_to_dict(system: AnySystem) -> Dict[str, Any]:
    """Inverse of :func:`parse_system` (matrices as nested lists)."""
    payload: Dict[str, Any] = {name: getattr(system, name).tolist() for name in MATRIX_NAMES}
    if isinstance(system, ContinuousSystem):
        payload["continuous"] = True
    else:
        payload["dt"] = system.dt
    return payload


__all__ = [
    "AnySystem",
    "SystemFileError",
    "SystemSpec",
    "load_system",
    "parse_system",
    "system_to_dict",
]
