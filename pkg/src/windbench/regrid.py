"""Bilinear regridding between regular and curvilinear lat/lon grids.

Interpolation weights are computed once from the geometry and applied to
every time step, so a target value is always a convex combination of its
four enclosing source values: constants and bilinear fields reproduce
exactly and the output can never overshoot the local stencil. Target points
outside the source hull, or whose enclosing source cell is degenerate, are
NaN. A NaN at any enclosing corner makes the target NaN.
"""
from __future__ import annotations

import logging

import numpy as np

from .grids import GRID_REGULAR, GriddedSeries, GridSpec

log = logging.getLogger(__name__)

_NEWTON_TOL = 1e-13
_NEWTON_MAX_ITER = 40


def regrid_bilinear(src: GriddedSeries, target: GridSpec) -> GriddedSeries:
    """Interpolate a series onto `target`, independently per time step."""
    tlat, tlon = target.point_latlon()
    pts_lat = tlat.ravel()
    pts_lon = tlon.ravel()
    if src.grid.kind == GRID_REGULAR:
        corners, weights, valid = _locate_regular(src.grid, pts_lat, pts_lon)
    else:
        corners, weights, valid = _locate_curvilinear(src.grid, pts_lat, pts_lon)

    n_t = src.n_t
    n_pts = pts_lat.size
    out = np.full((n_t, n_pts), np.nan)
    if valid.any():
        iy, ix = corners
        flat = src.values.reshape(n_t, -1)
        n_x = src.grid.shape[1]
        acc = np.zeros((n_t, int(valid.sum())))
        for k in range(4):
            idx = iy[k][valid] * n_x + ix[k][valid]
            acc += weights[k][valid] * flat[:, idx]
        out[:, valid] = acc
    out = out.reshape((n_t,) + target.shape)
    return GriddedSeries(target, src.times, out, units=src.units, name=src.name)


def _locate_regular(grid: GridSpec, plat: np.ndarray, plon: np.ndarray):
    """Cell indices and corner weights for points on a regular source grid."""
    lat, lon = grid.lat, grid.lon
    inside = ((plat >= lat[0]) & (plat <= lat[-1])
              & (plon >= lon[0]) & (plon <= lon[-1]))
    if lat.size < 2 or lon.size < 2:
        # a 1-wide axis spans no cell; only exact hits could interpolate,
        # which a zero-extent hull cannot support
        inside &= False
    jy = np.clip(np.searchsorted(lat, plat, side="right") - 1, 0, max(lat.size - 2, 0))
    jx = np.clip(np.searchsorted(lon, plon, side="right") - 1, 0, max(lon.size - 2, 0))
    with np.errstate(invalid="ignore", divide="ignore"):
        fy = np.where(inside, (plat - lat[jy]) / (lat[np.minimum(jy + 1, lat.size - 1)] - lat[jy]), 0.0)
        fx = np.where(inside, (plon - lon[jx]) / (lon[np.minimum(jx + 1, lon.size - 1)] - lon[jx]), 0.0)
    fy = np.clip(fy, 0.0, 1.0)
    fx = np.clip(fx, 0.0, 1.0)
    jy1 = np.minimum(jy + 1, lat.size - 1)
    jx1 = np.minimum(jx + 1, lon.size - 1)
    corners = (np.stack([jy, jy, jy1, jy1]), np.stack([jx, jx1, jx, jx1]))
    weights = np.stack([(1 - fy) * (1 - fx), (1 - fy) * fx, fy * (1 - fx), fy * fx])
    return corners, weights, inside


def _quad_corners(grid: GridSpec):
    """Corner coordinates of every source cell, as (4, n_cells) x/y arrays.

    Corner order: (j,i), (j,i+1), (j+1,i+1), (j+1,i), a closed loop.
    """
    y = grid.lat
    x = grid.lon
    ax = np.stack([x[:-1, :-1], x[:-1, 1:], x[1:, 1:], x[1:, :-1]])
    ay = np.stack([y[:-1, :-1], y[:-1, 1:], y[1:, 1:], y[1:, :-1]])
    return ax.reshape(4, -1), ay.reshape(4, -1)


def _convex_cells(ax: np.ndarray, ay: np.ndarray) -> np.ndarray:
    """True for strictly convex, non-degenerate quads (either orientation)."""
    cross = np.empty((4, ax.shape[1]))
    for k in range(4):
        e1x = ax[(k + 1) % 4] - ax[k]
        e1y = ay[(k + 1) % 4] - ay[k]
        e2x = ax[(k + 2) % 4] - ax[(k + 1) % 4]
        e2y = ay[(k + 2) % 4] - ay[(k + 1) % 4]
        cross[k] = e1x * e2y - e1y * e2x
    span = (ax.max(axis=0) - ax.min(axis=0)) * (ay.max(axis=0) - ay.min(axis=0))
    eps = 1e-12 * np.maximum(span, 1e-30)
    return np.all(cross > eps, axis=0) | np.all(cross < -eps, axis=0)


def _locate_curvilinear(grid: GridSpec, plat: np.ndarray, plon: np.ndarray):
    """Cell search + inverse bilinear map for a curvilinear source grid.

    Uses a uniform bin index over cell bounding boxes to gather candidate
    cells per point, an exact convex point-in-quad test to pick the cell,
    and Newton iteration to invert the bilinear map for the weights.
    """
    n_y, n_x = grid.shape
    n_pts = plat.size
    no_hit = (np.zeros((4, n_pts), dtype=np.intp),) * 2, np.zeros((4, n_pts)), np.zeros(n_pts, bool)
    if n_y < 2 or n_x < 2:
        return no_hit

    ax, ay = _quad_corners(grid)
    ok = _convex_cells(ax, ay)
    n_bad = int((~ok).sum())
    if n_bad:
        log.warning("regrid: %d degenerate source cell(s) treated as holes", n_bad)

    cxmin, cxmax = ax.min(axis=0), ax.max(axis=0)
    cymin, cymax = ay.min(axis=0), ay.max(axis=0)
    x0, x1 = cxmin[ok].min() if ok.any() else 0.0, cxmax[ok].max() if ok.any() else 0.0
    y0, y1 = cymin[ok].min() if ok.any() else 0.0, cymax[ok].max() if ok.any() else 0.0
    if not ok.any():
        return no_hit
    nbx = max(int(np.sqrt(ok.sum())), 1)
    nby = nbx
    bw_x = max((x1 - x0) / nbx, 1e-12)
    bw_y = max((y1 - y0) / nby, 1e-12)

    def bin_of(xs, ys):
        bx = np.clip(((xs - x0) / bw_x).astype(np.intp), 0, nbx - 1)
        by = np.clip(((ys - y0) / bw_y).astype(np.intp), 0, nby - 1)
        return by * nbx + bx

    # one entry per (cell, overlapped bin)
    cells = np.nonzero(ok)[0]
    bx_lo = np.clip(((cxmin[cells] - x0) / bw_x).astype(np.intp), 0, nbx - 1)
    bx_hi = np.clip(((cxmax[cells] - x0) / bw_x).astype(np.intp), 0, nbx - 1)
    by_lo = np.clip(((cymin[cells] - y0) / bw_y).astype(np.intp), 0, nby - 1)
    by_hi = np.clip(((cymax[cells] - y0) / bw_y).astype(np.intp), 0, nby - 1)
    spans = (bx_hi - bx_lo + 1) * (by_hi - by_lo + 1)
    entry_cell = np.repeat(cells, spans)
    entry_bin = np.empty(entry_cell.size, dtype=np.intp)
    pos = 0
    for c, xl, xh, yl, yh in zip(cells, bx_lo, bx_hi, by_lo, by_hi):
        nx_span = xh - xl + 1
        for by in range(yl, yh + 1):
            entry_bin[pos:pos + nx_span] = by * nbx + np.arange(xl, xh + 1)
            pos += nx_span
    order = np.argsort(entry_bin, kind="stable")
    entry_bin = entry_bin[order]
    entry_cell = entry_cell[order]
    bin_starts = np.searchsorted(entry_bin, np.arange(nbx * nby))
    bin_ends = np.searchsorted(entry_bin, np.arange(nbx * nby), side="right")

    in_bbox = (plon >= x0) & (plon <= x1) & (plat >= y0) & (plat <= y1)
    pbins = np.where(in_bbox, bin_of(plon, plat), 0)
    counts = np.where(in_bbox, bin_ends[pbins] - bin_starts[pbins], 0)
    if counts.any():
        idx_pts = np.nonzero(counts > 0)[0]
        pair_pt = np.repeat(idx_pts, counts[idx_pts])
        pair_cell = np.concatenate([entry_cell[bin_starts[pbins[p]]:bin_ends[pbins[p]]]
                                    for p in idx_pts])
    else:
        pair_pt = np.empty(0, dtype=np.intp)
        pair_cell = np.empty(0, dtype=np.intp)

    hit_cell = np.full(n_pts, -1, dtype=np.intp)
    if pair_pt.size:
        px = plon[pair_pt]
        py = plat[pair_pt]
        qx = ax[:, pair_cell]
        qy = ay[:, pair_cell]
        side = np.empty((4, pair_pt.size))
        for k in range(4):
            ex = qx[(k + 1) % 4] - qx[k]
            ey = qy[(k + 1) % 4] - qy[k]
            side[k] = ex * (py - qy[k]) - ey * (px - qx[k])
        inside = np.all(side >= -1e-12, axis=0) | np.all(side <= 1e-12, axis=0)
        if inside.any():
            # lowest cell index wins so repeated runs are identical
            cand_pt = pair_pt[inside]
            cand_cell = pair_cell[inside]
            order = np.lexsort((cand_cell, cand_pt))
            cand_pt = cand_pt[order]
            cand_cell = cand_cell[order]
            first = np.ones(cand_pt.size, bool)
            first[1:] = cand_pt[1:] != cand_pt[:-1]
            hit_cell[cand_pt[first]] = cand_cell[first]

    valid = hit_cell >= 0
    corners_iy = np.zeros((4, n_pts), dtype=np.intp)
    corners_ix = np.zeros((4, n_pts), dtype=np.intp)
    weights = np.zeros((4, n_pts))
    if valid.any():
        cell = hit_cell[valid]
        cy, cx = np.divmod(cell, n_x - 1)
        corners_iy[:, valid] = np.stack([cy, cy, cy + 1, cy + 1])
        corners_ix[:, valid] = np.stack([cx, cx + 1, cx + 1, cx])
        xi, eta = _invert_bilinear(ax[:, cell], ay[:, cell], plon[valid], plat[valid])
        w1 = (1 - xi) * (1 - eta)   # (j, i)
        w2 = xi * (1 - eta)         # (j, i+1)
        w3 = xi * eta               # (j+1, i+1)
        w4 = (1 - xi) * eta         # (j+1, i)
        weights[:, valid] = np.stack([w1, w2, w3, w4])
    return (corners_iy, corners_ix), weights, valid


def _invert_bilinear(qx: np.ndarray, qy: np.ndarray, px: np.ndarray, py: np.ndarray):
    """Local (xi, eta) in [0,1]^2 with P = bilinear(corners; xi, eta).

    Newton iteration from the cell center; quads are known convex so the
    Jacobian stays invertible inside the cell.
    """
    ax_, bx, cx, dx = qx
    ay_, by, cy, dy = qy
    xi = np.full(px.shape, 0.5)
    eta = np.full(px.shape, 0.5)
    for _ in range(_NEWTON_MAX_ITER):
        fx = (1 - xi) * (1 - eta) * ax_ + xi * (1 - eta) * bx + xi * eta * cx + (1 - xi) * eta * dx - px
        fy = (1 - xi) * (1 - eta) * ay_ + xi * (1 - eta) * by + xi * eta * cy + (1 - xi) * eta * dy - py
        jxx = (1 - eta) * (bx - ax_) + eta * (cx - dx)
        jxy = (1 - xi) * (dx - ax_) + xi * (cx - bx)
        jyx = (1 - eta) * (by - ay_) + eta * (cy - dy)
        jyy = (1 - xi) * (dy - ay_) + xi * (cy - by)
        det = jxx * jyy - jxy * jyx
        det = np.where(np.abs(det) < 1e-300, np.inf, det)
        dxi = (fx * jyy - fy * jxy) / det
        deta = (fy * jxx - fx * jyx) / det
        xi -= dxi
        eta -= deta
        if max(np.abs(dxi).max(initial=0.0), np.abs(deta).max(initial=0.0)) < _NEWTON_TOL:
            break
    return np.clip(xi, 0.0, 1.0), np.clip(eta, 0.0, 1.0)
