import json

import pytest

from windbench.synthetic import weibull_uv, write_fixture
from windbench.wgrd import write_wgrd


@pytest.fixture
def small_fixture(tmp_path):
    """A fast 3-candidate fixture on a 6x6 grid with 40 six-hour steps."""
    return write_fixture(tmp_path / "fx", n_t=40, n_y=6, n_x=6)


@pytest.fixture
def mixed_grid_fixture(tmp_path):
    """Candidates on grids of different sizes, so regression has spread."""
    out = tmp_path / "mixed"
    out.mkdir()
    datasets = []

    def emit(ds_id, role, seed, n):
        u, v = weibull_uv(seed, n_t=30, n_y=n, n_x=n)
        up, vp = out / f"{ds_id}_u.wgrd", out / f"{ds_id}_v.wgrd"
        write_wgrd(u, up)
        write_wgrd(v, vp)
        datasets.append({"id": ds_id, "role": role,
                         "u_path": str(up), "v_path": str(vp)})

    emit("REF", "reference", 5, 16)
    emit("C-A", "candidate", 11, 6)
    emit("C-B", "candidate", 23, 9)
    emit("C-C", "candidate", 37, 12)
    emit("C-D", "candidate", 41, 14)
    from windbench.power import builtin_curve_path
    config = {
        "region": {"lat_min": -90.0, "lat_max": 90.0,
                   "lon_min": -180.0, "lon_max": 179.999},
        "turbine_csv": str(builtin_curve_path()),
        "output_dir": str(out / "run"),
        "kde_grid_size": 256,
        "top_k": 100,
        "datasets": datasets,
    }
    path = out / "config.json"
    path.write_text(json.dumps(config, indent=2))
    return path
