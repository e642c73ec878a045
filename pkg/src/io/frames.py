"""CSV / JSON artifacts for estimator runs.

Every file is written to a temporary sibling and renamed into place, so a
reader never sees a partially written artifact.  Floats are written in
scientific notation with 17 significant digits, which round-trips doubles
exactly.
"""

from __future__ import annotations

import contextlib
import csv
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterator, List, Mapping, TextIO

import numpy as np

from ..simulation.evaluate import EstimateSeries
from ..simulation.scenario import Trajectory


def format_float(value: float) -> str:
    return f"{float(value):.16e}"


def ensure_output_dir(path: Path) -> Path:
    path.mkdir(parents=True, exist_ok=True)
    return path


def _default_file_mode() -> int:
    # os.umask is the only way to read the mask; restore it immediately.
    mask = os.umask(0)
    os.umask(mask)
    return 0o666 & ~mask


@contextlib.contextmanager
def atomic_writer(path: Path, *, newline: str | None = None) -> Iterator[TextIO]:
    """Open a temp file next to ``path``; rename it over ``path`` on success."""
    path = Path(path)
    handle = tempfile.NamedTemporaryFile(
        "w", encoding="utf-8", newline=newline, dir=path.parent, prefix=f".{path.name}.", delete=False
    )
    try:
        with handle:
            yield handle
        # NamedTemporaryFile creates 0600 files.
        os.chmod(handle.name, _default_file_mode())
        os.replace(handle.name, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(handle.name)
        raise


def write_json(path: Path, payload: Mapping[str, Any]) -> None:
    with atomic_writer(path) as handle:
        json.dump(payload, handle, indent=2, sort_keys=False)
        handle.write("\n")


def frame_columns(nz: int, ny: int, nx: int, nw: int) -> List[str]:
    columns = ["step", "time"]
    for prefix, count in (
        ("z", nz),
        ("y_true", ny),
        ("y_hat", ny),
        ("y_err", ny),
        ("x_true", nx),
        ("x_hat", nx),
        ("w_true", nw),
        ("w_hat", nw),
    ):
        columns.extend(f"{prefix}{index + 1}" for index in range(count))
    return columns


def write_frames_csv(path: Path, traj: Trajectory, series: EstimateSeries, dt: float) -> None:
    """One row per step: measurements, truth, estimates and errors."""
    n_steps = traj.n_steps
    if series.y_hat.shape[0] != n_steps:
        raise ValueError(f"length mismatch: {series.y_hat.shape[0]} estimates for {n_steps} steps")

    columns = frame_columns(traj.Z.shape[1], traj.Ytrue.shape[1], traj.X.shape[1], traj.W.shape[1])
    values = np.hstack(
        [
            traj.times(dt)[:, None],
            traj.Z,
            traj.Ytrue,
            series.y_hat,
            traj.Ytrue - series.y_hat,
            traj.X,
            series.x_hat,
            traj.W,
            series.w_hat,
        ]
    )
    with atomic_writer(path, newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(columns)
        for step, row in enumerate(values):
            writer.writerow([step, *(format_float(value) for value in row)])


def read_frames_csv(path: Path) -> Dict[str, np.ndarray]:
    """Read an emitted CSV back into float columns keyed by header name."""
    with Path(path).open("r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        fields = list(reader.fieldnames or [])
        rows = [[float(row[name]) for name in fields] for row in reader]
    data = np.array(rows, dtype=float).reshape(len(rows), len(fields))
    return {name: data[:, index] for index, name in enumerate(fields)}


__all__ = [
    "atomic_writer",
    "ensure_output_dir",
    "format_float",
    "frame_columns",
    "read_frames_csv",
    "write_frames_csv",
    "write_json",
]
