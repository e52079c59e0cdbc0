"""windbench: evaluate gridded wind datasets against a reference.

Pipeline: wind speed from (u, v) components, power-law extrapolation to hub
height, rectangular/land-mask region selection, pooled wind-speed samples,
distribution metrics (KDE + Jensen-Shannon, Wasserstein-1, extreme means),
turbine power conversion, and log-resolution skill regressions.
"""

__version__ = "0.1.0"

from .grids import (GRID_CURVILINEAR, GRID_REGULAR, EmptyRegionError, GriddedSeries,
                    GridError, GridSpec, MaskMismatchError, RegionSelection,
                    count_points, select_region)
from .metrics import (DegenerateSampleError, DensityEstimate, EmpiricalSample,
                      MetricsRow, compare_to_reference, js_distance, kde_eval,
                      pool_series, scott_bandwidth, shared_grid, top_k_mean,
                      w1_distance)
from .power import (PowerCurve, PowerCurveError, PowerSummary, builtin_curve_path,
                    cumulative_power, load_power_curve, power_at, relative_power)
from .regrid import regrid_bilinear
from .regression import RegressionResult, f_cdf_complement, loglinear_fit
from .wgrd import WgrdError, read_landmask, read_wgrd, write_wgrd
from .wind import WindParams, extrapolate_height, wind_speed

__all__ = [
    "GRID_CURVILINEAR", "GRID_REGULAR", "EmptyRegionError", "GriddedSeries",
    "GridError", "GridSpec", "MaskMismatchError", "RegionSelection",
    "count_points", "select_region",
    "DegenerateSampleError", "DensityEstimate", "EmpiricalSample", "MetricsRow",
    "compare_to_reference", "js_distance", "kde_eval", "pool_series",
    "scott_bandwidth", "shared_grid", "top_k_mean", "w1_distance",
    "PowerCurve", "PowerCurveError", "PowerSummary", "builtin_curve_path",
    "cumulative_power", "load_power_curve", "power_at", "relative_power",
    "regrid_bilinear",
    "RegressionResult", "f_cdf_complement", "loglinear_fit",
    "WgrdError", "read_landmask", "read_wgrd", "write_wgrd",
    "WindParams", "extrapolate_height", "wind_speed",
    "__version__",
]
