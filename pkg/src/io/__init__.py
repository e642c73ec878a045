"""Artifact writers for estimator runs."""

from __future__ import annotations

from .frames import atomic_writer, read_frames_csv, write_frames_csv, write_json
from .plots import SCRIPT_NAME, write_plot_script

__all__ = [
    "SCRIPT_NAME",
    "atomic_writer",
    "read_frames_csv",
    "write_frames_csv",
    "write_json",
    "write_plot_script",
]
