"""Synthetic Weibull wind fields for tests, demos and the selftest.

Wind speeds are drawn from a Weibull distribution (the usual model for
near-surface winds) with a uniformly random direction, then split into u/v
components, so the reconstructed speed distribution is Weibull by
construction. Everything is seeded and reproducible.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .grids import GriddedSeries, GridSpec
from .power import builtin_curve_path
from .wgrd import write_wgrd

EPOCH_2005 = 1104537600  # 2005-01-01T00:00:00Z


def weibull_uv(seed: int, n_t: int = 400, n_y: int = 20, n_x: int = 20,
               shape_k: float = 2.0, scale: float = 8.0,
               lat0: float = 40.0, lon0: float = -10.0, spacing: float = 0.5,
               start_epoch: int = EPOCH_2005, step_hours: float = 6.0,
               ) -> tuple[GriddedSeries, GriddedSeries]:
    """One (u, v) component pair on a regular grid, speeds ~ Weibull(k, scale)."""
    rng = np.random.default_rng(seed)
    speeds = scale * rng.weibull(shape_k, size=(n_t, n_y, n_x))
    theta = rng.uniform(0.0, 2.0 * np.pi, size=(n_t, n_y, n_x))
    grid = GridSpec.regular(lat0 + spacing * np.arange(n_y),
                            lon0 + spacing * np.arange(n_x))
    times = start_epoch + np.arange(n_t, dtype=np.int64) * int(step_hours * 3600)
    u = GriddedSeries(grid, times, speeds * np.cos(theta), units="m/s", name="u")
    v = GriddedSeries(grid, times, speeds * np.sin(theta), units="m/s", name="v")
    return u, v


def write_fixture(out_dir, candidates: dict[str, dict] | None = None,
                  n_t: int = 400, n_y: int = 20, n_x: int = 20,
                  self_compare_id: str | None = None) -> Path:
    """Write a complete evaluation fixture and return the config path.

    Creates WGRD u/v files for a reference plus the given candidates
    ({id: {seed, shape_k, scale}}), points the config at the bundled V126
    curve, and covers the whole synthetic grid with the region bounds.
    `self_compare_id` adds one candidate that reuses the reference files.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if candidates is None:
        candidates = {
            "WBL-A": dict(seed=11, shape_k=2.0, scale=7.5),
            "WBL-B": dict(seed=23, shape_k=1.8, scale=9.0),
            "WBL-C": dict(seed=37, shape_k=2.3, scale=6.5),
        }

    def emit(ds_id: str, seed: int, shape_k: float, scale: float) -> dict:
        u, v = weibull_uv(seed, n_t=n_t, n_y=n_y, n_x=n_x,
                          shape_k=shape_k, scale=scale)
        u_path = out / f"{ds_id}_u.wgrd"
        v_path = out / f"{ds_id}_v.wgrd"
        write_wgrd(u, u_path)
        write_wgrd(v, v_path)
        return {"u_path": str(u_path), "v_path": str(v_path)}

    datasets = [dict(id="REF", role="reference", **emit("REF", 5, 2.1, 8.0))]
    for ds_id, params in candidates.items():
        datasets.append(dict(id=ds_id, role="candidate",
                             **emit(ds_id, params["seed"], params["shape_k"],
                                    params["scale"])))
    if self_compare_id:
        ref = datasets[0]
        datasets.append({"id": self_compare_id, "role": "candidate",
                         "u_path": ref["u_path"], "v_path": ref["v_path"]})

    config = {
        "region": {"lat_min": 25.0, "lat_max": 73.0, "lon_min": -30.0, "lon_max": 42.0},
        "hub_height_m": 126.0,
        "alpha": 1.0 / 7.0,
        "kde_grid_size": 1024,
        "top_k": 100,
        "turbine_csv": str(builtin_curve_path()),
        "step_hours": 6.0,
        "output_dir": str(out / "run"),
        "datasets": datasets,
    }
    config_path = out / "config.json"
    config_path.write_text(json.dumps(config, indent=2))
    return config_path
