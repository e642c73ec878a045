"""Generated plotting script over the per-estimator CSVs.

The package itself never renders images; ``run`` drops a standalone script
next to the CSVs that draws truth vs estimates and estimate errors with
matplotlib when the user has it installed.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Mapping

from .frames import atomic_writer

SCRIPT_NAME = "plot_results.py"

_TEMPLATE = '''#!/usr/bin/env python3
"""Plot estimator CSVs written by `feedkal run` ({scenario} scenario)."""
from __future__ import annotations

import csv
from pathlib import Path

import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent
ESTIMATORS = {estimators}


def load(name):
    with (HERE / f"{{name}}.csv").open(newline="") as handle:
        rows = list(csv.DictReader(handle))
    return {{key: [float(row[key]) for row in rows] for key in rows[0]}}


def plot_channel(data, truth_key, hat_key, err_key, title, filename):
    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(9, 6))
    first = next(iter(data.values()))
    top.plot(first["time"], first[truth_key], color="black", linewidth=0.8, label="true")
    for name, legend in ESTIMATORS.items():
        top.plot(data[name]["time"], data[name][hat_key], linewidth=0.8, label=legend)
        errors = data[name].get(err_key) or [t - h for t, h in zip(data[name][truth_key], data[name][hat_key])]
        bottom.plot(data[name]["time"], errors, linewidth=0.8, label=legend)
    top.set_title(title)
    top.set_ylabel("value")
    bottom.set_ylabel("error")
    bottom.set_xlabel("time [s]")
    top.legend(loc="upper right")
    bottom.legend(loc="upper right")
    fig.tight_layout()
    fig.savefig(HERE / filename, dpi=120)
    plt.close(fig)


def main():
    data = {{name: load(name) for name in ESTIMATORS}}
    first = next(iter(data.values()))
    ny = sum(1 for key in first if key.startswith("y_true"))
    nx = sum(1 for key in first if key.startswith("x_true"))
    for index in range(1, ny + 1):
        plot_channel(data, f"y_true{{index}}", f"y_hat{{index}}", f"y_err{{index}}",
                     f"Output y({{index}}) estimation", f"y{{index}}_estimates.png")
    for index in range(1, nx + 1):
        plot_channel(data, f"x_true{{index}}", f"x_hat{{index}}", "",
                     f"State x({{index}}) estimation", f"x{{index}}_estimates.png")


if __name__ == "__main__":
    main()
'''


def render_plot_script(legends: Mapping[str, str], scenario: str) -> str:
    return _TEMPLATE.format(estimators=json.dumps(dict(legends)), scenario=scenario)


def write_plot_script(out_dir: Path, legends: Mapping[str, str], scenario: str) -> Path:
    path = Path(out_dir) / SCRIPT_NAME
    with atomic_writer(path) as handle:
        handle.write(render_plot_script(legends, scenario))
    return path


__all__ = ["SCRIPT_NAME", "render_plot_script", "write_plot_script"]
