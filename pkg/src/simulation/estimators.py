"""Registry of the three compared estimators and a runner over one trajectory."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..estimation import filter_tv
from ..estimation.filter_ss import SteadyFilter, steady_filter
from ..estimation.filter_tv import FilterState, OutputMode
from ..model.system import DiscreteSystem
from .evaluate import DEFAULT_BURN_IN, ErrorStats, EstimateSeries, evaluate
from .scenario import Trajectory

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EstimatorSpec:
    name: str
    legend: str
    mode: OutputMode
    steady: bool


ESTIMATORS: Dict[str, EstimatorSpec] = {
    "tv_corrected": EstimatorSpec("tv_corrected", "new", OutputMode.CORRECTED, steady=False),
    "ss_corrected": EstimatorSpec("ss_corrected", "new ss", OutputMode.CORRECTED, steady=True),
    "ss_legacy": EstimatorSpec("ss_legacy", "prev ss", OutputMode.LEGACY, steady=True),
}

LEGENDS: Dict[str, str] = {name: spec.legend for name, spec in ESTIMATORS.items()}


def parse_selection(names: Iterable[str]) -> Tuple[str, ...]:
    """Validate estimator names, dropping duplicates but keeping order."""
    selection: List[str] = []
    for raw in names:
        name = raw.strip()
        if not name:
            continue
        if name not in ESTIMATORS:
            raise ValueError(f"unknown estimator {name!r}; choose from {', '.join(ESTIMATORS)}")
        if name not in selection:
            selection.append(name)
    if not selection:
        raise ValueError("select at least one estimator")
    return tuple(selection)


@dataclass(frozen=True)
class EstimatorRun:
    spec: EstimatorSpec
    series: EstimateSeries
    stats: ErrorStats


def _run_one(
    spec: EstimatorSpec,
    system: DiscreteSystem,
    traj: Trajectory,
    p0_scale: float,
    steady: Optional[SteadyFilter],
    burn_in: int,
) -> EstimatorRun:
    if spec.steady:
        series = EstimateSeries.from_trace(steady.trace(None, traj.Z, traj.U, spec.mode))
    else:
        init = FilterState.initial(system, p0_scale=p0_scale)
        series = EstimateSeries.from_frames(filter_tv.run(system, init, traj.Z, traj.U, spec.mode))
    stats = evaluate(traj, series, burn_in=burn_in)
    logger.info("%s (%s): y_err_var=%s", spec.name, spec.legend, stats.y_err_var.round(6).tolist())
    return EstimatorRun(spec=spec, series=series, stats=stats)


def run_estimators(
    system: DiscreteSystem,
    traj: Trajectory,
    names: Sequence[str],
    *,
    p0_scale: float = 1.0,
    burn_in: int = DEFAULT_BURN_IN,
    steady: Optional[SteadyFilter] = None,
) -> Dict[str, EstimatorRun]:
    """Run the selected estimators on the same trajectory.

    Runs are independent, so they execute on a thread pool; results come
    back in selection order.
    """
    selection = parse_selection(names)
    specs = [ESTIMATORS[name] for name in selection]
    if steady is None and any(spec.steady for spec in specs):
        steady = steady_filter(system)

    with ThreadPoolExecutor(max_workers=len(specs)) as pool:
        futures = {
            spec.name: pool.submit(_run_one, spec, system, traj, p0_scale, steady, burn_in) for spec in specs
        }
        results: Dict[str, EstimatorRun] = {}
        for name, future in futures.items():
            try:
                results[name] = future.result()
            except Exception:
                logger.error("estimator %s failed", name, exc_info=True)
                raise
    return results


__all__ = [
    "ESTIMATORS",
    "EstimatorRun",
    "EstimatorSpec",
    "LEGENDS",
    "parse_selection",
    "run_estimators",
]
