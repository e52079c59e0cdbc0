"""Wind speed from velocity components and power-law height extrapolation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import GriddedSeries, GridError

SHEAR_EXPONENT_NEUTRAL = 1.0 / 7.0


@dataclass(frozen=True)
class WindParams:
    """Shear-law parameters: w(h_hub) = w(h_ref) * (h_hub / h_ref)**alpha."""

    alpha: float = SHEAR_EXPONENT_NEUTRAL
    h_ref: float = 10.0
    h_hub: float = 126.0

    def __post_init__(self):
        if not (self.alpha > 0 and self.h_ref > 0 and self.h_hub > 0):
            raise ValueError(
                f"alpha, h_ref, h_hub must be positive "
                f"(got {self.alpha}, {self.h_ref}, {self.h_hub})")

    @property
    def factor(self) -> float:
        return (self.h_hub / self.h_ref) ** self.alpha


def wind_speed(u: GriddedSeries, v: GriddedSeries) -> GriddedSeries:
    """Elementwise speed sqrt(u^2 + v^2); NaN wherever either input is NaN."""
    if not u.same_axes(v):
        raise GridError("u and v must share the same grid and time axis")
    speed = np.hypot(u.values, v.values)
    return GriddedSeries(u.grid, u.times, speed, units="m/s", name="w")


def extrapolate_height(w: GriddedSeries, params: WindParams) -> GriddedSeries:
    """Scale speeds from params.h_ref to params.h_hub with the power law."""
    return GriddedSeries(w.grid, w.times, w.values * params.factor,
                         units=w.units, name=w.name)
