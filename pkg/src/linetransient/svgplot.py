"""Minimal deterministic SVG line plots.

Output depends only on the inputs: fixed canvas, fixed number formatting, no
timestamps or random ids.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 800, 450
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 90, 20, 40, 50
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")


def nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    """Round tick positions covering ``[lo, hi]`` with steps of 1, 2 or 5 x 10^n."""
    if hi <= lo:
        span = abs(lo) if lo else 1.0
        lo, hi = lo - 0.5 * span, hi + 0.5 * span
    raw = (hi - lo) / max(target - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 5, 10) if m * mag >= raw)
    first = math.floor(lo / step + 1e-9) * step
    last = math.ceil(hi / step - 1e-9) * step
    count = int(round((last - first) / step))
    return [first + k * step for k in range(count + 1)]


def _fmt_tick(value: float, step: float) -> str:
    if value == 0:
        return "0"
    if abs(value) >= 1e5 or abs(value) < 1e-3:
        return f"{value:.3g}"
    decimals = max(0, -int(math.floor(math.log10(step))))
    return f"{value:.{decimals}f}"


def line_plot(x, series: dict, title: str, xlabel: str, ylabel: str = "") -> str:
    """Render ``series`` (name -> y array) against ``x`` as an SVG document."""
    x = np.asarray(x, dtype=float)
    if x.size < 2:
        raise ValueError("need at least two points to plot")
    ys = {name: np.asarray(v, dtype=float) for name, v in series.items()}
    all_y = np.concatenate(list(ys.values()))
    xticks = nice_ticks(float(x.min()), float(x.max()))
    yticks = nice_ticks(float(all_y.min()), float(all_y.max()))
    x0, x1 = xticks[0], xticks[-1]
    y0, y1 = yticks[0], yticks[-1]
    left, top = MARGIN_LEFT, MARGIN_TOP
    pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(v):
        return left + (v - x0) / (x1 - x0) * pw

    def py(v):
        return top + (y1 - v) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<title>{escape(title)}</title>',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" font-size="15">{escape(title)}</text>',
        f'<g id="plot-area" data-x-min="{x0!r}" data-x-max="{x1!r}" data-y-min="{y0!r}" '
        f'data-y-max="{y1!r}" data-left="{left}" data-top="{top}" data-width="{pw}" '
        f'data-height="{ph}">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    xstep = xticks[1] - xticks[0]
    ystep = yticks[1] - yticks[0]
    for v in xticks:
        p = px(v)
        out.append(f'<line x1="{p:.2f}" y1="{top + ph}" x2="{p:.2f}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{p:.2f}" y="{top + ph + 18}" text-anchor="middle">{_fmt_tick(v, xstep)}</text>')
    for v in yticks:
        p = py(v)
        out.append(f'<line x1="{left - 5}" y1="{p:.2f}" x2="{left}" y2="{p:.2f}" stroke="black"/>')
        out.append(f'<line x1="{left}" y1="{p:.2f}" x2="{left + pw}" y2="{p:.2f}" stroke="#dddddd"/>')
        out.append(f'<text x="{left - 8}" y="{p + 4:.2f}" text-anchor="end">{_fmt_tick(v, ystep)}</text>')
    for k, (name, y) in enumerate(ys.items()):
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x.tolist(), y.tolist()))
        color = COLORS[k % len(COLORS)]
        out.append(
            f'<polyline data-channel="{escape(name)}" fill="none" stroke="{color}" '
            f'stroke-width="1" points="{pts}"/>'
        )
    out.append("</g>")
    out.append(
        f'<text x="{left + pw / 2:.1f}" y="{HEIGHT - 10}" text-anchor="middle">{escape(xlabel)}</text>'
    )
    if ylabel:
        out.append(
            f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 16 {top + ph / 2:.1f})">{escape(ylabel)}</text>'
        )
    for k, name in enumerate(ys):
        ly = top + 14 + 16 * k
        color = COLORS[k % len(COLORS)]
        out.append(f'<line x1="{left + pw - 70}" y1="{ly - 4}" x2="{left + pw - 50}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw - 45}" y="{ly}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
