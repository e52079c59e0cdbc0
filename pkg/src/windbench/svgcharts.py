"""Self-contained SVG charts rendered from run artifacts.

Charts are built with ElementTree (guaranteed well-formed XML), carry no
external references, and embed the same number strings as the CSV files so
reports can be checked against the data byte for byte.
"""
from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from pathlib import Path

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]
W, H = 720, 420
MARGIN = dict(left=70, right=170, top=40, bottom=50)


def _svg_root(title: str) -> ET.Element:
    root = ET.Element("svg", xmlns="http://www.w3.org/2000/svg",
                      width=str(W), height=str(H),
                      viewBox=f"0 0 {W} {H}")
    ET.SubElement(root, "rect", x="0", y="0", width=str(W), height=str(H),
                  fill="white")
    t = ET.SubElement(root, "text", x=str(W / 2), y="22",
                      attrib={"text-anchor": "middle",
                              "font-family": "sans-serif", "font-size": "15"})
    t.text = title
    return root


class _Scale:
    def __init__(self, lo: float, hi: float, out_lo: float, out_hi: float):
        if hi <= lo:
            hi = lo + 1.0
        self.lo, self.hi, self.out_lo, self.out_hi = lo, hi, out_lo, out_hi

    def __call__(self, v: float) -> float:
        frac = (v - self.lo) / (self.hi - self.lo)
        return self.out_lo + frac * (self.out_hi - self.out_lo)


def _axes(root: ET.Element, sx: _Scale, sy: _Scale, x_label: str, y_label: str):
    x0, x1 = MARGIN["left"], W - MARGIN["right"]
    y0, y1 = H - MARGIN["bottom"], MARGIN["top"]
    ET.SubElement(root, "line", x1=str(x0), y1=str(y0), x2=str(x1), y2=str(y0),
                  stroke="black")
    ET.SubElement(root, "line", x1=str(x0), y1=str(y0), x2=str(x0), y2=str(y1),
                  stroke="black")
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        vx = sx.lo + frac * (sx.hi - sx.lo)
        px = sx(vx)
        ET.SubElement(root, "line", x1=f"{px:.2f}", y1=str(y0),
                      x2=f"{px:.2f}", y2=str(y0 + 4), stroke="black")
        lbl = ET.SubElement(root, "text", x=f"{px:.2f}", y=str(y0 + 18),
                            attrib={"text-anchor": "middle",
                                    "font-family": "sans-serif", "font-size": "11"})
        lbl.text = f"{vx:.3g}"
        vy = sy.lo + frac * (sy.hi - sy.lo)
        py = sy(vy)
        ET.SubElement(root, "line", x1=str(x0 - 4), y1=f"{py:.2f}",
                      x2=str(x0), y2=f"{py:.2f}", stroke="black")
        lbl = ET.SubElement(root, "text", x=str(x0 - 8), y=f"{py + 4:.2f}",
                            attrib={"text-anchor": "end",
                                    "font-family": "sans-serif", "font-size": "11"})
        lbl.text = f"{vy:.3g}"
    xt = ET.SubElement(root, "text", x=str((x0 + x1) / 2), y=str(H - 12),
                       attrib={"text-anchor": "middle",
                               "font-family": "sans-serif", "font-size": "12"})
    xt.text = x_label
    yt = ET.SubElement(root, "text", x="18", y=str((y0 + y1) / 2),
                       attrib={"text-anchor": "middle",
                               "font-family": "sans-serif", "font-size": "12",
                               "transform": f"rotate(-90 18 {(y0 + y1) / 2})"})
    yt.text = y_label


def _legend(root: ET.Element, labels: list[str]):
    x = W - MARGIN["right"] + 16
    for i, label in enumerate(labels):
        y = MARGIN["top"] + 16 * i
        color = PALETTE[i % len(PALETTE)]
        ET.SubElement(root, "rect", x=str(x), y=str(y), width="11", height="11",
                      fill=color)
        t = ET.SubElement(root, "text", x=str(x + 16), y=str(y + 10),
                          attrib={"font-family": "sans-serif", "font-size": "11"})
        t.text = label


def _write(root: ET.Element, path: Path):
    ET.ElementTree(root).write(path, encoding="unicode", xml_declaration=True)
    with open(path, "a") as fh:
        fh.write("\n")


def kde_chart(densities: dict[str, tuple[list[float], list[float]]], path) -> None:
    """Overlaid per-dataset KDE curves on the common speed grid."""
    root = _svg_root("Wind speed probability density by dataset")
    all_x = [x for xs, _ in densities.values() for x in xs]
    all_y = [y for _, ys in densities.values() for y in ys]
    sx = _Scale(min(all_x), max(all_x), MARGIN["left"], W - MARGIN["right"])
    sy = _Scale(0.0, max(all_y), H - MARGIN["bottom"], MARGIN["top"])
    _axes(root, sx, sy, "wind speed (m/s)", "probability mass per cell")
    for i, (ds_id, (xs, ys)) in enumerate(densities.items()):
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
        ET.SubElement(root, "polyline", points=pts, fill="none",
                      stroke=PALETTE[i % len(PALETTE)],
                      attrib={"stroke-width": "1.5", "data-source-id": ds_id})
    _legend(root, list(densities))
    _write(root, Path(path))


def scatter_chart(panels: dict[str, list[tuple[float, float, str]]],
                  fits: dict[str, tuple[float, float] | None],
                  log_base: str, path) -> None:
    """Metric vs log(resolution) dots, one chart stacked per metric.

    `panels` maps metric name -> [(points, value, dataset id)];
    `fits` maps metric name -> (intercept, slope) in the given log base,
    or None when no fit is available.
    """
    n = max(len(panels), 1)
    logf = math.log10 if log_base == "base10" else math.log
    root = ET.Element("svg", xmlns="http://www.w3.org/2000/svg",
                      width=str(W), height=str(H * n),
                      viewBox=f"0 0 {W} {H * n}")
    ET.SubElement(root, "rect", x="0", y="0", width=str(W), height=str(H * n),
                  fill="white")
    for panel_i, (metric, rows) in enumerate(panels.items()):
        dy = panel_i * H
        g = ET.SubElement(root, "g", transform=f"translate(0 {dy})")
        t = ET.SubElement(g, "text", x=str(W / 2), y="22",
                          attrib={"text-anchor": "middle",
                                  "font-family": "sans-serif", "font-size": "15"})
        t.text = f"{metric} vs spatial resolution"
        xs = [logf(r) for r, _, _ in rows]
        ys = [v for _, v, _ in rows]
        pad_x = 0.05 * (max(xs) - min(xs) or 1.0)
        pad_y = 0.1 * (max(ys) - min(ys) or abs(ys[0]) or 1.0)
        sx = _Scale(min(xs) - pad_x, max(xs) + pad_x,
                    MARGIN["left"], W - MARGIN["right"])
        sy = _Scale(min(ys) - pad_y, max(ys) + pad_y,
                    H - MARGIN["bottom"], MARGIN["top"])
        base_txt = "log10" if log_base == "base10" else "ln"
        _axes(g, sx, sy, f"{base_txt}(points in region)", metric)
        fit = fits.get(metric)
        if fit is not None:
            b0, b1 = fit
            x_lo, x_hi = sx.lo, sx.hi
            ET.SubElement(g, "line",
                          x1=f"{sx(x_lo):.2f}", y1=f"{sy(b0 + b1 * x_lo):.2f}",
                          x2=f"{sx(x_hi):.2f}", y2=f"{sy(b0 + b1 * x_hi):.2f}",
                          stroke="#555555", attrib={"stroke-width": "1.2"})
        for i, (r, v, ds_id) in enumerate(rows):
            ET.SubElement(g, "circle", cx=f"{sx(logf(r)):.2f}",
                          cy=f"{sy(v):.2f}", r="4",
                          fill=PALETTE[i % len(PALETTE)],
                          attrib={"data-source-id": ds_id})
        _legend(g, [ds_id for _, _, ds_id in rows])
    _write(root, Path(path))


def bar_chart(rows: list[tuple[str, float, str]], path) -> None:
    """Relative cumulative power bars; labels are the exact CSV strings.

    `rows` holds (dataset id, numeric value, csv cell text).
    """
    root = _svg_root("Cumulative power relative to the reference (%)")
    values = [v for _, v, _ in rows] or [0.0]
    lo, hi = min(0.0, min(values)), max(0.0, max(values))
    sy = _Scale(lo, hi if hi > lo else lo + 1.0,
                H - MARGIN["bottom"], MARGIN["top"])
    x0, x1 = MARGIN["left"], W - MARGIN["right"]
    slot = (x1 - x0) / max(len(rows), 1)
    width = slot * 0.6
    zero_y = sy(0.0)
    ET.SubElement(root, "line", x1=str(x0), y1=f"{zero_y:.2f}",
                  x2=str(x1), y2=f"{zero_y:.2f}", stroke="black")
    for i, (ds_id, value, cell_text) in enumerate(rows):
        cx = x0 + (i + 0.5) * slot
        top = min(sy(value), zero_y)
        height = abs(sy(value) - zero_y)
        ET.SubElement(root, "rect", x=f"{cx - width / 2:.2f}", y=f"{top:.2f}",
                      width=f"{width:.2f}", height=f"{height:.2f}",
                      fill=PALETTE[i % len(PALETTE)],
                      attrib={"data-source-id": ds_id})
        val = ET.SubElement(root, "text", x=f"{cx:.2f}",
                            y=f"{top - 6 if value >= 0 else top + height + 14:.2f}",
                            attrib={"text-anchor": "middle",
                                    "font-family": "sans-serif", "font-size": "10",
                                    "class": "bar-value"})
        val.text = cell_text
        name = ET.SubElement(root, "text", x=f"{cx:.2f}", y=str(H - 28),
                             attrib={"text-anchor": "middle",
                                     "font-family": "sans-serif", "font-size": "11"})
        name.text = ds_id
    _write(root, Path(path))
