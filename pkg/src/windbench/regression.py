"""Least-squares fit of skill metrics against log spatial resolution.

Resolution is measured as the number of grid points in the study region.
The default logarithm is base 10: that is the base under which the fitted
slopes and intercepts line up with the published evaluation this toolkit
was validated against (R^2 and the p-value are base-invariant either way).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc

DEFAULT_LOG_BASE = "base10"
_LOG = {"natural": np.log, "base10": np.log10}


@dataclass
class RegressionResult:
    intercept: float
    slope: float
    slope_std_error: float
    r_squared: float        # fraction; report layers scale to percent
    p_value: float
    n: int
    log_base: str


def f_cdf_complement(f_stat: float, d1: float, d2: float) -> float:
    """Upper-tail probability of the F(d1, d2) distribution.

    Computed through the regularized incomplete beta function:
    P(F > f) = I_x(d2/2, d1/2) with x = d2 / (d2 + d1 f).
    """
    if not f_stat >= 0:
        raise ValueError(f"F statistic must be >= 0, got {f_stat}")
    if d1 < 1 or d2 < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got ({d1}, {d2})")
    x = d2 / (d2 + d1 * f_stat)
    return float(betainc(d2 / 2.0, d1 / 2.0, x))


def loglinear_fit(resolutions, metrics, log_base: str = DEFAULT_LOG_BASE) -> RegressionResult:
    """OLS fit of metric values on log(resolution) with full diagnostics.

    Returns intercept, slope, the slope's standard error
    sqrt(RSS/(n-2) / Sxx), R^2 = 1 - RSS/TSS, and the overall-F-test
    p-value from the F(1, n-2) upper tail.
    """
    if log_base not in _LOG:
        raise ValueError(f"log_base must be one of {sorted(_LOG)}, got {log_base!r}")
    r = np.asarray(resolutions, dtype=np.float64)
    y = np.asarray(metrics, dtype=np.float64)
    if r.shape != y.shape or r.ndim != 1:
        raise ValueError("resolutions and metrics must be matching 1-D arrays")
    n = r.size
    if n < 3:
        raise ValueError(f"need at least 3 data points, got {n}")
    if np.any(r <= 0):
        raise ValueError("resolutions must be positive")
    if not (np.isfinite(r).all() and np.isfinite(y).all()):
        raise ValueError("inputs must be finite")
    x = _LOG[log_base](r)
    if float(np.ptp(x)) <= 1e-9 * max(1.0, float(np.max(np.abs(x)))):
        raise ValueError("degenerate regressor: all resolutions are equal")
    # fsum everywhere: exactly rounded sums make the fit independent of the
    # order in which the (r, y) pairs were supplied
    xbar = math.fsum(x) / n
    sxx = math.fsum((x - xbar) ** 2)
    ybar = math.fsum(y) / n
    slope = math.fsum((x - xbar) * (y - ybar)) / sxx
    intercept = ybar - slope * xbar
    resid = y - (intercept + slope * x)
    rss = max(math.fsum(resid ** 2), 0.0)
    tss = math.fsum((y - ybar) ** 2)
    if tss <= 0.0:
        # constant response: nothing to explain and no evidence of a trend
        return RegressionResult(intercept, slope, 0.0, 0.0, 1.0, n, log_base)
    r_squared = 1.0 - rss / tss
    se = math.sqrt(rss / (n - 2) / sxx)
    with np.errstate(divide="ignore"):
        f_stat = np.float64(tss - rss) / (np.float64(rss) / (n - 2))
    p_value = f_cdf_complement(float(f_stat), 1, n - 2)
    return RegressionResult(intercept, slope, se, r_squared, p_value, n, log_base)
