"""Minimal deterministic SVG line plots."""

from __future__ import annotations

import math
from typing import Mapping, Sequence
from xml.sax.saxutils import escape

from .errors import EmptySeries

WIDTH, HEIGHT = 640, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 160, 30, 50
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")


def _num(v: float) -> str:
    return f"{v:.2f}"


def _tick(v: float) -> str:
    return f"{v:.4g}"


def _range(vals):
    lo, hi = min(vals), max(vals)
    if lo == hi:
        pad = abs(lo) * 0.05 or 1.0
        return lo - pad, hi + pad
    return lo, hi


def render_svg(series: Mapping[str, Sequence], x_label: str = "x", y_label: str = "y", title: str = "") -> str:
    """Render named ``[(x, y), ...]`` polylines with linear axes and a legend.

    Non-finite points are dropped. Output bytes depend only on the input.
    """
    if not series:
        raise EmptySeries("no series to plot")
    clean = {}
    for name, pts in series.items():
        pts = [(float(x), float(y)) for x, y in pts if math.isfinite(x) and math.isfinite(y)]
        if len(pts) < 2:
            raise EmptySeries(f"series {name!r} needs at least two finite points")
        clean[name] = pts
    xs = [x for pts in clean.values() for x, _ in pts]
    ys = [y for pts in clean.values() for _, y in pts]
    x0, x1 = _range(xs)
    y0, y1 = _range(ys)
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def sx(x):
        return MARGIN_L + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return MARGIN_T + (y1 - y) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{_num(MARGIN_L + pw / 2)}" y="18" text-anchor="middle">{escape(title)}</text>')
    for i in range(5):
        fx = x0 + (x1 - x0) * i / 4
        fy = y0 + (y1 - y0) * i / 4
        out.append(f'<text x="{_num(sx(fx))}" y="{MARGIN_T + ph + 16}" text-anchor="middle">{_tick(fx)}</text>')
        out.append(f'<text x="{MARGIN_L - 6}" y="{_num(sy(fy) + 4)}" text-anchor="end">{_tick(fy)}</text>')
    out.append(f'<text x="{_num(MARGIN_L + pw / 2)}" y="{HEIGHT - 10}" text-anchor="middle">{escape(x_label)}</text>')
    out.append(
        f'<text x="16" y="{_num(MARGIN_T + ph / 2)}" text-anchor="middle" '
        f'transform="rotate(-90 16 {_num(MARGIN_T + ph / 2)})">{escape(y_label)}</text>'
    )
    for i, (name, pts) in enumerate(clean.items()):
        color = COLORS[i % len(COLORS)]
        coords = " ".join(f"{_num(sx(x))},{_num(sy(y))}" for x, y in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
        ly = MARGIN_T + 14 + 18 * i
        lx = WIDTH - MARGIN_R + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text class="legend" x="{lx + 26}" y="{ly + 4}">{escape(str(name))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
