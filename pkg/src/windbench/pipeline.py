"""End-to-end evaluation run: datasets in, report artifacts out.

Per dataset: read u/v, clip the time window, derive hub-height speeds,
select the region, pool the sample and accumulate turbine power. The
reference is processed first; candidates are then scored against it in
parallel (one worker each, capped by WINDBENCH_THREADS). Results are
aggregated in config order, so output files are byte-identical no matter
how many workers ran.
"""
from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import ConfigError, RunConfig
from .grids import RegionSelection, count_points, select_region
from .metrics import (EmpiricalSample, MetricsRow, compare_to_reference, kde_eval,
                      pool_series, scott_bandwidth, shared_grid, top_k_mean)
from .power import PowerSummary, cumulative_power, load_power_curve, relative_power
from .regression import RegressionResult, loglinear_fit
from .wgrd import read_landmask, read_wgrd
from .wind import WindParams, extrapolate_height, wind_speed

log = logging.getLogger(__name__)

REGRESSED_METRICS = ("js", "w1", "top_k_mean")


def worker_count(n_tasks: int) -> int:
    cap = os.environ.get("WINDBENCH_THREADS")
    if cap is not None:
        try:
            cap = int(cap)
        except ValueError as exc:
            raise ConfigError(f"WINDBENCH_THREADS must be an integer, got {cap!r}") from exc
        if cap < 1:
            raise ConfigError("WINDBENCH_THREADS must be >= 1")
        return max(1, min(cap, n_tasks))
    return max(1, min(os.cpu_count() or 1, n_tasks))


@dataclass
class DatasetOutcome:
    id: str
    role: str
    n_points: int = 0
    n_dropped: int = 0
    bandwidth: float = 0.0
    sample: EmpiricalSample | None = None
    power: PowerSummary | None = None
    metrics: MetricsRow | None = None
    relative_power_pct: float | None = None
    error: str | None = None


@dataclass
class RunResult:
    outcomes: list[DatasetOutcome]
    regressions: list[RegressionResult] = field(default_factory=list)
    regression_metrics: list[str] = field(default_factory=list)
    regression_note: str | None = None
    densities: dict[str, tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)
    log_base: str = "base10"

    @property
    def failed(self) -> bool:
        return any(o.error for o in self.outcomes)


def prepare_dataset(cfg: RunConfig, entry, region: RegionSelection,
                    curve) -> DatasetOutcome:
    """Load one dataset and reduce it to sample + power summary."""
    u = read_wgrd(cfg.resolve(entry.u_path))
    v = read_wgrd(cfg.resolve(entry.v_path))
    if cfg.time_window is not None:
        u = u.select_times(*cfg.time_window)
        v = v.select_times(*cfg.time_window)
    w = wind_speed(u, v)
    params = WindParams(alpha=cfg.alpha, h_ref=entry.ref_height_m,
                        h_hub=cfg.hub_height_m)
    w_hub = extrapolate_height(w, params)
    selected = select_region(w_hub, region)
    n_points = count_points(w_hub, region)
    sample = pool_series(selected, source_id=entry.id)
    if sample.n_dropped:
        log.info("dataset %s: dropped %d NaN values at pooling",
                 entry.id, sample.n_dropped)
    summary = cumulative_power(selected, curve, step_hours=cfg.step_hours)
    return DatasetOutcome(
        id=entry.id, role=entry.role, n_points=n_points,
        n_dropped=sample.n_dropped, sample=sample, power=summary,
    )


def evaluate_run(cfg: RunConfig) -> RunResult:
    """Run the full evaluation; per-candidate failures do not stop the run."""
    mask = read_landmask(cfg.resolve(cfg.mask_path)) if cfg.mask_path else None
    region = RegionSelection(cfg.lat_min, cfg.lat_max, cfg.lon_min, cfg.lon_max,
                             land_mask=mask)
    curve = load_power_curve(cfg.resolve(cfg.turbine_csv))

    ref_entry = cfg.reference
    try:
        ref = prepare_dataset(cfg, ref_entry, region, curve)
        ref.metrics = MetricsRow(source_id=ref.id, mean=ref.sample.mean(),
                                 top_k_mean=top_k_mean(ref.sample, cfg.top_k))
        ref.relative_power_pct = 0.0
    except Exception as exc:  # noqa: BLE001 - reported, run aborts cleanly
        log.error("reference dataset %s failed: %s", ref_entry.id, exc)
        failed = DatasetOutcome(id=ref_entry.id, role="reference", error=str(exc))
        outcomes = [failed] + [
            DatasetOutcome(id=c.id, role="candidate",
                           error=f"reference dataset {ref_entry.id!r} failed")
            for c in cfg.candidates]
        return RunResult(outcomes=outcomes, log_base=cfg.log_base)

    def score(entry) -> DatasetOutcome:
        try:
            out = prepare_dataset(cfg, entry, region, curve)
            out.metrics = compare_to_reference(ref.sample, out.sample,
                                               grid_size=cfg.kde_grid_size,
                                               k=cfg.top_k)
            out.relative_power_pct = relative_power(
                out.power, ref.power, normalize=cfg.power_normalization)
            return out
        except Exception as exc:  # noqa: BLE001 - isolates dataset failures
            log.error("candidate dataset %s failed: %s", entry.id, exc)
            return DatasetOutcome(id=entry.id, role="candidate", error=str(exc))

    cands = cfg.candidates
    with ThreadPoolExecutor(max_workers=worker_count(len(cands))) as pool:
        scored = list(pool.map(score, cands))

    result = RunResult(outcomes=[ref] + scored, log_base=cfg.log_base)
    _fit_regressions(result, cfg)
    _display_densities(result, cfg)
    return result


def _fit_regressions(result: RunResult, cfg: RunConfig) -> None:
    """Regress each metric on log(points) across the scored candidates."""
    rows = [(o, o.metrics) for o in result.outcomes
            if o.role == "candidate" and o.error is None and o.metrics is not None]
    if len(rows) < 3:
        result.regression_note = (
            f"skipped: {len(rows)} usable candidate(s), need at least 3")
        return
    entries = {d.id: d for d in cfg.datasets}
    points = [float(entries[o.id].declared_points
                    if entries[o.id].declared_points is not None else o.n_points)
              for o, _ in rows]
    for metric in REGRESSED_METRICS:
        values = [getattr(m, metric) for _, m in rows]
        try:
            fit = loglinear_fit(points, values, log_base=cfg.log_base)
        except ValueError as exc:
            result.regression_note = f"{metric}: {exc}"
            continue
        result.regressions.append(fit)
        result.regression_metrics.append(metric)


def _display_densities(result: RunResult, cfg: RunConfig) -> None:
    """Per-dataset KDE on one common grid, for reports and charts."""
    ok = [o for o in result.outcomes if o.error is None and o.sample is not None]
    if not ok:
        return
    bandwidths = {}
    for o in ok:
        try:
            bandwidths[o.id] = scott_bandwidth(o.sample)
        except ValueError:
            continue
    usable = [o for o in ok if o.id in bandwidths]
    if not usable:
        return
    grid = shared_grid([o.sample for o in usable],
                       [bandwidths[o.id] for o in usable],
                       size=cfg.kde_grid_size)
    for o in usable:
        est = kde_eval(o.sample, grid, bandwidths[o.id])
        o.bandwidth = est.bandwidth
        result.densities[o.id] = (grid, est.density)
