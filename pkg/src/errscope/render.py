"""Deterministic SVG rendering of the comparison figures.

Every figure is a standalone SVG 1.1 document with no external resources,
timestamps or random ids. Numbers are formatted to at most 6 significant
digits, so identical inputs always serialize to identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import HexbinLayer, KdeGrid, hex_vertices
from .errorspace import ErrorSpaceAnalysis, percentile_ranks
from .exceptions import MissingLayerInput, UnknownModel
from .ingest import PredictionSet
from .metrics import BoxplotStats, compute_errors

PANEL_SIZE = 800.0
MARGIN = 60.0
GRID_COLUMNS = 4
CROWN_SEGMENTS = 256

ZONE_A_FILL = (255, 165, 0)   # orange: model A better, |y| > |x|
ZONE_B_FILL = (34, 139, 34)   # green: model B better, |y| < |x|
ZONE_OPACITY = 0.15
POINT_RADIUS = 3.0
SCATTER_COLOR = (68, 68, 68)

ERROR_SPACE_LAYERS = ("zones", "scatter", "proximity", "crown", "kde", "hexbin")


def fmt(v: float) -> str:
    """Fixed float formatting: max 6 significant digits, no negative zero."""
    if not math.isfinite(v):
        raise ValueError(f"non-finite coordinate {v!r}")
    s = format(float(v), ".6g")
    return "0" if s == "-0" else s


def rgb(color: tuple[int, int, int]) -> str:
    return "#%02x%02x%02x" % color


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        .replace('"', "&quot;")
    )


@dataclass(frozen=True)
class Colormap:
    """Piecewise-linear RGB ramp over t in [0, 1]."""

    name: str
    control_points: tuple[tuple[float, tuple[int, int, int]], ...]

    def __post_init__(self):
        ts = [t for t, _ in self.control_points]
        if ts[0] != 0.0 or ts[-1] != 1.0 or any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("control points must strictly increase from 0 to 1")

    def __call__(self, t: float) -> tuple[int, int, int]:
        t = min(max(float(t), 0.0), 1.0)
        pts = self.control_points
        for (t0, c0), (t1, c1) in zip(pts, pts[1:]):
            if t <= t1:
                w = 0.0 if t1 == t0 else (t - t0) / (t1 - t0)
                return tuple(int(round(a + w * (b - a))) for a, b in zip(c0, c1))
        return pts[-1][1]


# Warm near the center / accurate, cool far away, per the method's reading.
WARM_COOL = Colormap(
    name="warm_cool",
    control_points=(
        (0.0, (215, 48, 39)),
        (0.25, (253, 174, 97)),
        (0.5, (254, 224, 144)),
        (0.75, (145, 191, 219)),
        (1.0, (69, 117, 180)),
    ),
)


@dataclass(frozen=True)
class Transform:
    """Affine data-to-canvas map: X = sx*x + tx, Y = sy*y + ty (y flipped)."""

    sx: float
    tx: float
    sy: float
    ty: float

    def apply(self, x: float, y: float) -> tuple[float, float]:
        return (self.sx * x + self.tx, self.sy * y + self.ty)

    @staticmethod
    def fit(x0: float, x1: float, y0: float, y1: float,
            left: float, right: float, top: float, bottom: float) -> "Transform":
        sx = (right - left) / (x1 - x0)
        sy = (top - bottom) / (y1 - y0)
        return Transform(sx=sx, tx=left - sx * x0, sy=sy, ty=bottom - sy * y0)


class Figure:
    """Ordered list of SVG fragments plus the data-to-canvas transform."""

    def __init__(self, width: float, height: float, transform: Transform | None = None):
        self.width = width
        self.height = height
        self.transform = transform
        self.elements: list[str] = []

    def add(self, fragment: str) -> None:
        self.elements.append(fragment)

    def circle(self, cx: float, cy: float, r: float, fill: str,
               opacity: float | None = None, stroke: str | None = None,
               stroke_width: float | None = None, cls: str | None = None) -> None:
        attrs = [f'cx="{fmt(cx)}"', f'cy="{fmt(cy)}"', f'r="{fmt(r)}"', f'fill="{fill}"']
        if opacity is not None:
            attrs.append(f'fill-opacity="{fmt(opacity)}"')
        if stroke is not None:
            attrs.append(f'stroke="{stroke}"')
        if stroke_width is not None:
            attrs.append(f'stroke-width="{fmt(stroke_width)}"')
        if cls is not None:
            attrs.append(f'class="{cls}"')
        self.add(f"<circle {' '.join(attrs)}/>")

    def line(self, x1: float, y1: float, x2: float, y2: float, stroke: str,
             width: float = 1.0, dash: str | None = None) -> None:
        attrs = [f'x1="{fmt(x1)}"', f'y1="{fmt(y1)}"', f'x2="{fmt(x2)}"', f'y2="{fmt(y2)}"',
                 f'stroke="{stroke}"', f'stroke-width="{fmt(width)}"']
        if dash is not None:
            attrs.append(f'stroke-dasharray="{dash}"')
        self.add(f"<line {' '.join(attrs)}/>")

    def polygon(self, points: list[tuple[float, float]], fill: str,
                opacity: float | None = None, stroke: str | None = None,
                stroke_width: float | None = None, cls: str | None = None) -> None:
        pts = " ".join(f"{fmt(x)},{fmt(y)}" for x, y in points)
        attrs = [f'points="{pts}"', f'fill="{fill}"']
        if opacity is not None:
            attrs.append(f'fill-opacity="{fmt(opacity)}"')
        if stroke is not None:
            attrs.append(f'stroke="{stroke}"')
        if stroke_width is not None:
            attrs.append(f'stroke-width="{fmt(stroke_width)}"')
        if cls is not None:
            attrs.append(f'class="{cls}"')
        self.add(f"<polygon {' '.join(attrs)}/>")

    def rect(self, x: float, y: float, w: float, h: float, fill: str,
             opacity: float | None = None) -> None:
        attrs = [f'x="{fmt(x)}"', f'y="{fmt(y)}"', f'width="{fmt(w)}"',
                 f'height="{fmt(h)}"', f'fill="{fill}"']
        if opacity is not None:
            attrs.append(f'fill-opacity="{fmt(opacity)}"')
        self.add(f"<rect {' '.join(attrs)}/>")

    def text(self, x: float, y: float, content: str, size: float = 14.0,
             anchor: str = "middle", fill: str = "#000000") -> None:
        self.add(
            f'<text x="{fmt(x)}" y="{fmt(y)}" text-anchor="{anchor}" '
            f'font-size="{fmt(size)}" font-family="sans-serif" fill="{fill}">'
            f"{_escape(content)}</text>"
        )

    def to_svg(self) -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{fmt(self.width)}" height="{fmt(self.height)}" '
            f'viewBox="0 0 {fmt(self.width)} {fmt(self.height)}">\n'
        )
        return head + "\n".join(self.elements) + "\n</svg>\n"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_svg())


def _white_background(fig: Figure) -> None:
    fig.rect(0.0, 0.0, fig.width, fig.height, "#ffffff")


def _nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    """Round tick positions covering [lo, hi]."""
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min((m for m in (1.0, 2.0, 5.0, 10.0) if m * mag >= raw), default=10.0) * mag
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * span:
        ticks.append(0.0 if abs(t) < step * 1e-9 else t)
        t += step
    return ticks


# ---------------------------------------------------------------------------
# boxplots

def render_boxplots(stats: list[tuple[str, BoxplotStats]],
                    width: float | None = None, height: float = 600.0) -> Figure:
    """One box-and-whisker glyph per model on a shared error axis."""
    if not stats:
        raise ValueError("no boxplot stats to render")
    m = len(stats)
    if width is None:
        width = max(320.0, 90.0 * m + 2 * MARGIN)

    values = []
    for _, s in stats:
        values += [s.min_whisker, s.max_whisker, *s.outliers]
    lo, hi = min(values + [0.0]), max(values + [0.0])
    pad = 0.05 * (hi - lo) if hi > lo else 1.0
    lo, hi = lo - pad, hi + pad

    tr = Transform.fit(0.0, float(m), lo, hi, MARGIN, width - MARGIN,
                       MARGIN, height - MARGIN)
    fig = Figure(width, height, transform=tr)
    _white_background(fig)

    # Shared error axis with ticks, plus the zero reference line.
    for tick in _nice_ticks(lo, hi):
        _, ty = tr.apply(0.0, tick)
        fig.line(MARGIN - 4, ty, MARGIN, ty, "#000000")
        fig.text(MARGIN - 8, ty + 4, fmt(tick), size=12, anchor="end")
    fig.line(MARGIN, MARGIN, MARGIN, height - MARGIN, "#000000")
    _, zero_y = tr.apply(0.0, 0.0)
    if lo <= 0.0 <= hi:
        fig.line(MARGIN, zero_y, width - MARGIN, zero_y, "#999999", dash="4 4")

    box_halfwidth = 0.3
    for i, (name, s) in enumerate(stats):
        cx = i + 0.5
        x0, _ = tr.apply(cx - box_halfwidth, 0.0)
        x1, _ = tr.apply(cx + box_halfwidth, 0.0)
        xc, _ = tr.apply(cx, 0.0)
        _, y_q1 = tr.apply(0.0, s.q1)
        _, y_q3 = tr.apply(0.0, s.q3)
        _, y_med = tr.apply(0.0, s.median)
        _, y_lo = tr.apply(0.0, s.min_whisker)
        _, y_hi = tr.apply(0.0, s.max_whisker)

        fig.line(xc, y_lo, xc, y_q1, "#000000")
        fig.line(xc, y_q3, xc, y_hi, "#000000")
        fig.line((x0 + xc) / 2, y_lo, (x1 + xc) / 2, y_lo, "#000000")
        fig.line((x0 + xc) / 2, y_hi, (x1 + xc) / 2, y_hi, "#000000")
        fig.polygon([(x0, y_q1), (x1, y_q1), (x1, y_q3), (x0, y_q3)],
                    fill="#c6dbef", stroke="#000000", stroke_width=1.0)
        fig.line(x0, y_med, x1, y_med, "#000000", width=2.0)
        for o in s.outliers:
            _, oy = tr.apply(0.0, o)
            fig.circle(xc, oy, 2.5, "none", stroke=rgb(SCATTER_COLOR),
                       stroke_width=1.0, cls="outlier")
        fig.text(xc, height - MARGIN + 20, name, size=13)

    return fig


# ---------------------------------------------------------------------------
# predicted vs actual

def _pred_vs_actual_panel(fig: Figure, tr: Transform, y_true: np.ndarray,
                          y_pred: np.ndarray, pct: np.ndarray, colormap: Colormap,
                          lo: float, hi: float, label: str | None) -> None:
    p0 = tr.apply(lo, lo)
    p1 = tr.apply(hi, hi)
    fig.line(p0[0], p0[1], p1[0], p1[1], "#888888", width=1.5)
    for yt, yp, t in zip(y_true, y_pred, pct):
        x, y = tr.apply(float(yt), float(yp))
        fig.circle(x, y, POINT_RADIUS, rgb(colormap(float(t))), cls="pt")
    if label:
        fig.text((tr.apply(lo, 0)[0] + tr.apply(hi, 0)[0]) / 2,
                 tr.apply(0, hi)[1] - 8, label, size=16)


def render_pred_vs_actual(ps: PredictionSet, model: str,
                          colormap: Colormap = WARM_COOL) -> Figure:
    """Scatter of predictions against truth, colored by accuracy percentile.

    Warm colors mark the most accurate predictions (smallest |error|).
    """
    if model not in ps.models:
        raise UnknownModel(model)
    y_true = np.asarray(ps.y_true)
    y_pred = np.asarray(ps.models[model])
    pct = percentile_ranks(np.abs(y_pred - y_true))

    lo = float(min(y_true.min(), y_pred.min()))
    hi = float(max(y_true.max(), y_pred.max()))
    if hi == lo:
        hi = lo + 1.0
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad

    tr = Transform.fit(lo, hi, lo, hi, MARGIN, PANEL_SIZE - MARGIN,
                       MARGIN, PANEL_SIZE - MARGIN)
    fig = Figure(PANEL_SIZE, PANEL_SIZE, transform=tr)
    _white_background(fig)
    _pred_vs_actual_panel(fig, tr, y_true, y_pred, pct, colormap, lo, hi, model)
    fig.text(PANEL_SIZE / 2, PANEL_SIZE - 16, "actual", size=14)
    return fig


def render_model_grid(ps: PredictionSet, order: list[str],
                      colormap: Colormap = WARM_COOL,
                      global_scale: bool = False) -> Figure:
    """Per-model predicted-vs-actual panels laid out in a 4-wide grid.

    With global_scale, the colormap is normalized over all models' absolute
    errors at once instead of per panel.
    """
    for model in order:
        if model not in ps.models:
            raise UnknownModel(model)
    m = len(order)
    cols = min(m, GRID_COLUMNS)
    rows = math.ceil(m / GRID_COLUMNS)
    fig = Figure(cols * PANEL_SIZE, rows * PANEL_SIZE)
    _white_background(fig)

    y_true = np.asarray(ps.y_true)
    all_abs = None
    if global_scale:
        all_abs = np.concatenate(
            [np.abs(np.asarray(ps.models[mname]) - y_true) for mname in order])
        global_ranks = percentile_ranks(all_abs)

    for k, model in enumerate(order):
        y_pred = np.asarray(ps.models[model])
        abs_err = np.abs(y_pred - y_true)
        if global_scale:
            pct = global_ranks[k * ps.n:(k + 1) * ps.n]
        else:
            pct = percentile_ranks(abs_err)
        lo = float(min(y_true.min(), y_pred.min()))
        hi = float(max(y_true.max(), y_pred.max()))
        if hi == lo:
            hi = lo + 1.0
        pad = 0.05 * (hi - lo)
        lo, hi = lo - pad, hi + pad
        col, row = k % GRID_COLUMNS, k // GRID_COLUMNS
        left = col * PANEL_SIZE + MARGIN
        top = row * PANEL_SIZE + MARGIN
        tr = Transform.fit(lo, hi, lo, hi, left, left + PANEL_SIZE - 2 * MARGIN,
                           top, top + PANEL_SIZE - 2 * MARGIN)
        if fig.transform is None:
            fig.transform = tr
        _pred_vs_actual_panel(fig, tr, y_true, y_pred, pct, colormap, lo, hi, model)
    return fig


# ---------------------------------------------------------------------------
# 2D error space

def _crown_extent(analysis: ErrorSpaceAnalysis) -> tuple[float, float]:
    t = analysis.crown_threshold
    if analysis.metric == "euclidean":
        return (t, t)
    cov = analysis.covariance
    return (t * math.sqrt(max(cov[0, 0], 0.0)), t * math.sqrt(max(cov[1, 1], 0.0)))


def _crown_curve(analysis: ErrorSpaceAnalysis) -> list[tuple[float, float]]:
    """Data-space polyline of the ellipse at distance = crown_threshold."""
    t = analysis.crown_threshold
    cx, cy = analysis.median2d
    chol = np.linalg.cholesky(analysis.covariance)
    pts = []
    for k in range(CROWN_SEGMENTS):
        a = 2.0 * math.pi * k / CROWN_SEGMENTS
        u = np.array([math.cos(a), math.sin(a)])
        v = t * (chol @ u)
        pts.append((cx + float(v[0]), cy + float(v[1])))
    return pts


def render_error_space(analysis: ErrorSpaceAnalysis,
                       layers=("zones", "proximity", "crown"),
                       colormap: Colormap = WARM_COOL,
                       kde: KdeGrid | None = None,
                       hexgrid: HexbinLayer | None = None) -> Figure:
    """The 2D error space with selectable layers.

    Stacking, background to foreground: density (kde/hexbin), comparison
    zones, axes and diagonals, median crown (white), points.
    """
    layers = set(layers)
    unknown = layers - set(ERROR_SPACE_LAYERS)
    if unknown:
        raise ValueError(f"unknown layer(s): {', '.join(sorted(unknown))}")
    if "kde" in layers and kde is None:
        raise MissingLayerInput("kde layer requested without a KdeGrid")
    if "hexbin" in layers and hexgrid is None:
        raise MissingLayerInput("hexbin layer requested without a HexbinLayer")

    coords = analysis.coords()
    ex, ey = _crown_extent(analysis)
    cx, cy = analysis.median2d
    limit = max(
        float(np.abs(coords).max()) if coords.size else 1.0,
        abs(cx) + ex, abs(cy) + ey, 1e-12,
    ) * 1.05

    tr = Transform.fit(-limit, limit, -limit, limit, MARGIN, PANEL_SIZE - MARGIN,
                       MARGIN, PANEL_SIZE - MARGIN)
    fig = Figure(PANEL_SIZE, PANEL_SIZE, transform=tr)
    _white_background(fig)

    if "kde" in layers:
        xs, ys = kde.x_coords(), kde.y_coords()
        vmax = float(kde.values.max())
        if vmax > 0.0:
            dx = (kde.x_max - kde.x_min) / (kde.nx - 1)
            dy = (kde.y_max - kde.y_min) / (kde.ny - 1)
            for ix in range(kde.nx):
                for iy in range(kde.ny):
                    v = kde.values[ix, iy]
                    if v <= 0.01 * vmax:
                        continue
                    x0, y0 = tr.apply(xs[ix] - dx / 2, ys[iy] + dy / 2)
                    color = rgb(colormap(1.0 - float(v) / vmax))
                    fig.rect(x0, y0, abs(tr.sx) * dx, abs(tr.sy) * dy, color,
                             opacity=0.6)

    if "hexbin" in layers:
        cmax = max(c for _, _, c in hexgrid.cells)
        for q, r, count in hexgrid.cells:
            verts = [tr.apply(x, y) for x, y in hex_vertices(q, r, hexgrid.hex_radius)]
            fig.polygon(verts, fill=rgb(colormap(1.0 - count / cmax)),
                        opacity=0.7, cls="hex")

    if "zones" in layers:
        origin = tr.apply(0.0, 0.0)
        tl = tr.apply(-limit, limit)
        tright = tr.apply(limit, limit)
        bl = tr.apply(-limit, -limit)
        br = tr.apply(limit, -limit)
        # |e2| > |e1|: model A's error is smaller -> orange hourglass.
        fig.polygon([origin, tl, tright], rgb(ZONE_A_FILL), opacity=ZONE_OPACITY,
                    cls="zone-a")
        fig.polygon([origin, bl, br], rgb(ZONE_A_FILL), opacity=ZONE_OPACITY,
                    cls="zone-a")
        fig.polygon([origin, tl, bl], rgb(ZONE_B_FILL), opacity=ZONE_OPACITY,
                    cls="zone-b")
        fig.polygon([origin, tright, br], rgb(ZONE_B_FILL), opacity=ZONE_OPACITY,
                    cls="zone-b")
        fig.line(*bl, *tright, "#666666")
        fig.line(*tl, *br, "#666666")

    # Axes through the origin.
    x0, ymid = tr.apply(-limit, 0.0)
    x1, _ = tr.apply(limit, 0.0)
    xmid, y0 = tr.apply(0.0, -limit)
    _, y1 = tr.apply(0.0, limit)
    fig.line(x0, ymid, x1, ymid, "#000000")
    fig.line(xmid, y0, xmid, y1, "#000000")
    for tick in _nice_ticks(-limit, limit):
        txp, typ = tr.apply(tick, 0.0)
        fig.line(txp, ymid - 3, txp, ymid + 3, "#000000")
        if tick != 0.0:
            fig.text(txp, ymid + 16, fmt(tick), size=10)
        _, tyy = tr.apply(0.0, tick)
        fig.line(xmid - 3, tyy, xmid + 3, tyy, "#000000")
        if tick != 0.0:
            fig.text(xmid - 6, tyy + 3, fmt(tick), size=10, anchor="end")

    if "crown" in layers:
        if analysis.metric == "euclidean":
            ccx, ccy = tr.apply(cx, cy)
            fig.circle(ccx, ccy, abs(tr.sx) * analysis.crown_threshold, "none",
                       stroke="#ffffff", stroke_width=2.0, cls="crown")
        else:
            verts = [tr.apply(x, y) for x, y in _crown_curve(analysis)]
            fig.polygon(verts, fill="none", stroke="#ffffff", stroke_width=2.0,
                        cls="crown")

    if "proximity" in layers:
        for p in analysis.points:
            x, y = tr.apply(p.e1, p.e2)
            fig.circle(x, y, POINT_RADIUS, rgb(colormap(p.percentile)), cls="pt")
    elif "scatter" in layers:
        for p in analysis.points:
            x, y = tr.apply(p.e1, p.e2)
            fig.circle(x, y, POINT_RADIUS, rgb(SCATTER_COLOR), opacity=0.7,
                       cls="pt")

    fig.text(PANEL_SIZE - MARGIN, ymid - 8, f"error {analysis.model_a}",
             size=13, anchor="end")
    fig.text(xmid + 8, MARGIN + 4, f"error {analysis.model_b}", size=13,
             anchor="start")
    return fig


# ---------------------------------------------------------------------------
# histogram

def render_histogram(values, bins: int, width: float = 800.0,
                     height: float = 500.0) -> Figure:
    """Equal-width histogram over [min, max]; last bin is right-closed."""
    if bins < 1:
        raise ValueError("bins must be >= 1")
    vals = np.asarray(values, dtype=float)
    lo, hi = float(vals.min()), float(vals.max())
    if hi == lo:
        hi = lo + 1.0
    counts, edges = np.histogram(vals, bins=bins, range=(lo, hi))

    cmax = max(int(counts.max()), 1)
    tr = Transform.fit(lo, hi, 0.0, float(cmax), MARGIN, width - MARGIN,
                       MARGIN, height - MARGIN)
    fig = Figure(width, height, transform=tr)
    _white_background(fig)
    for i, c in enumerate(counts):
        if c == 0:
            continue
        x0, y0 = tr.apply(float(edges[i]), 0.0)
        x1, y1 = tr.apply(float(edges[i + 1]), float(c))
        fig.rect(x0, y1, x1 - x0, y0 - y1, "#4575b4", opacity=0.9)
    fig.line(MARGIN, height - MARGIN, width - MARGIN, height - MARGIN, "#000000")
    for tick in _nice_ticks(lo, hi):
        txp, _ = tr.apply(tick, 0.0)
        fig.line(txp, height - MARGIN, txp, height - MARGIN + 5, "#000000")
        fig.text(txp, height - MARGIN + 20, fmt(tick), size=12)
    return fig
