"""Built-in oracle suite: checks the fast paths against independent methods.

Each check recomputes an expected value by a route that shares no code with
the implementation under test (double loops, a transport linear program,
numerical quadrature, closed-form scalars) and compares at a strict
tolerance. `windbench selftest` runs them all and reports line by line.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad
from scipy.optimize import linprog

from .metrics import (DensityEstimate, EmpiricalSample, js_distance, kde_eval,
                      kde_raw_naive, scott_bandwidth, w1_distance)
from .grids import GriddedSeries, GridSpec
from .regrid import regrid_bilinear
from .regression import f_cdf_complement, loglinear_fit
from .wind import WindParams


def w1_transport_lp(a: np.ndarray, b: np.ndarray) -> float:
    """W1 via the explicit optimal-transport linear program (small n only)."""
    n, m = len(a), len(b)
    cost = np.abs(np.subtract.outer(a, b)).ravel()
    a_eq = np.zeros((n + m, n * m))
    for i in range(n):
        a_eq[i, i * m:(i + 1) * m] = 1.0
    for j in range(m):
        a_eq[n + j, j::m] = 1.0
    b_eq = np.concatenate([np.full(n, 1.0 / n), np.full(m, 1.0 / m)])
    res = linprog(cost, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if not res.success:
        raise RuntimeError(f"transport LP failed: {res.message}")
    return float(res.fun)


def _f_sf_quadrature(f_stat: float, d1: int, d2: int) -> float:
    """F upper tail by integrating the density (independent of betainc)."""
    def pdf(x):
        lognum = (d1 / 2) * math.log(d1 / d2) + (d1 / 2 - 1) * math.log(x)
        logden = ((d1 + d2) / 2) * math.log1p(d1 * x / d2)
        logbeta = (math.lgamma(d1 / 2) + math.lgamma(d2 / 2)
                   - math.lgamma((d1 + d2) / 2))
        return math.exp(lognum - logden - logbeta)

    val, _ = quad(pdf, 0.0, f_stat, limit=200)
    return 1.0 - val


def run_selftest(verbose_print=print) -> bool:
    """Run every oracle check; returns True when all pass."""
    checks = []

    def check(name: str, fn):
        try:
            fn()
            checks.append((name, True, ""))
        except Exception as exc:  # noqa: BLE001 - report and continue
            checks.append((name, False, str(exc)))

    rng = np.random.default_rng(20240501)

    def kde_vs_naive():
        sample = EmpiricalSample(rng.weibull(2.0, 400) * 8.0, "selftest")
        h = scott_bandwidth(sample)
        grid = np.linspace(0.0, 30.0, 257)
        fast = kde_eval(sample, grid, h)
        raw = kde_raw_naive(sample, grid, h)
        mass = raw * (grid[1] - grid[0])
        ref = mass / math.fsum(mass)
        np.testing.assert_allclose(fast.density, ref, rtol=1e-12, atol=1e-300)

    def w1_vs_lp():
        for _ in range(25):
            a = rng.uniform(0, 20, rng.integers(1, 9))
            b = rng.uniform(0, 20, rng.integers(1, 9))
            closed = w1_distance(EmpiricalSample(a), EmpiricalSample(b))
            lp = w1_transport_lp(np.sort(a), np.sort(b))
            if abs(closed - lp) > 1e-9:
                raise AssertionError(f"closed {closed} vs LP {lp}")

    def w1_unit_case():
        d = w1_distance(EmpiricalSample([0.0, 1.0]), EmpiricalSample([1.0, 2.0]))
        assert abs(d - 1.0) < 1e-12, d

    def js_hand_value():
        grid = np.array([0.0, 1.0])
        p = DensityEstimate(grid, np.array([0.5, 0.5]), 1.0)
        q = DensityEstimate(grid, np.array([1.0, 0.0]), 1.0)
        assert abs(js_distance(p, q) - 0.557923045284) < 1e-9

    def js_axioms():
        grid = np.linspace(0.0, 1.0, 17)
        for _ in range(200):
            trio = []
            for _k in range(3):
                raw = rng.uniform(0, 1, 17)
                trio.append(DensityEstimate(grid, raw / math.fsum(raw), 1.0))
            p, q, r = trio
            dpq, dqp = js_distance(p, q), js_distance(q, p)
            dpr, dqr = js_distance(p, r), js_distance(q, r)
            assert abs(dpq - dqp) < 1e-12
            assert 0.0 <= dpq <= 1.0
            assert dpq <= dpr + dqr + 1e-12
        same = DensityEstimate(grid, np.full(17, 1.0 / 17), 1.0)
        assert js_distance(same, same) == 0.0

    def f_tail_vs_quadrature():
        for f_stat, d1, d2 in [(1.0, 1, 8), (0.5, 2, 10), (3.7, 1, 4),
                               (2.25, 3, 7), (10.0, 1, 9)]:
            mine = f_cdf_complement(f_stat, d1, d2)
            ref = _f_sf_quadrature(f_stat, d1, d2)
            if abs(mine - ref) > 1e-9 * max(ref, 1e-12):
                raise AssertionError(f"F({d1},{d2}) at {f_stat}: {mine} vs {ref}")

    def regression_recovery():
        r = np.array([10.0, 50.0, 250.0, 1250.0])
        y = 2.0 + 3.0 * np.log(r)
        fit = loglinear_fit(r, y, log_base="natural")
        assert abs(fit.intercept - 2.0) < 1e-9
        assert abs(fit.slope - 3.0) < 1e-9
        assert abs(fit.r_squared - 1.0) < 1e-12

    def shear_scalar():
        params = WindParams(alpha=1.0 / 7.0, h_ref=10.0, h_hub=126.0)
        assert abs(7.0 * params.factor - 10.0529571676786) < 1e-9

    def regrid_exact():
        grid = GridSpec.regular(np.linspace(0, 10, 11), np.linspace(0, 10, 11))
        lat2d, lon2d = grid.point_latlon()
        vals = (2.0 * lat2d + 3.0 * lon2d)[None, :, :]
        series = GriddedSeries(grid, [0], vals)
        target = GridSpec.regular(np.linspace(0.5, 9.5, 7), np.linspace(0.25, 9.75, 9))
        out = regrid_bilinear(series, target)
        tlat, tlon = target.point_latlon()
        np.testing.assert_allclose(out.values[0], 2.0 * tlat + 3.0 * tlon,
                                   rtol=0, atol=1e-10)

    check("kde matches naive double loop (rtol 1e-12)", kde_vs_naive)
    check("w1 closed form matches transport LP (n<=8)", w1_vs_lp)
    check("w1 of {0,1} vs {1,2} equals 1", w1_unit_case)
    check("js hand-computed two-cell value", js_hand_value)
    check("js metric axioms on random densities", js_axioms)
    check("F-tail matches density quadrature", f_tail_vs_quadrature)
    check("noiseless log-linear recovery", regression_recovery)
    check("hub-height shear scalar", shear_scalar)
    check("bilinear regrid exact on bilinear field", regrid_exact)

    ok = True
    for name, passed, detail in checks:
        verbose_print(f"[{'PASS' if passed else 'FAIL'}] {name}"
                      + (f": {detail}" if detail else ""))
        ok &= passed
    return ok
