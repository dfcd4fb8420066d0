"""Minimal SVG line and scatter plots, written directly as text."""
from __future__ import annotations

from typing import Sequence

import numpy as np

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")
_W, _H, _PAD = 480, 360, 40


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _frame(x: np.ndarray, y: np.ndarray, equal: bool = False):
    x0, x1 = float(np.nanmin(x)), float(np.nanmax(x))
    y0, y1 = float(np.nanmin(y)), float(np.nanmax(y))
    if x1 == x0:
        x0, x1 = x0 - 1.0, x1 + 1.0
    if y1 == y0:
        y0, y1 = y0 - 1.0, y1 + 1.0
    sx = (_W - 2 * _PAD) / (x1 - x0)
    sy = (_H - 2 * _PAD) / (y1 - y0)
    if equal:
        sx = sy = min(sx, sy)

    def to_px(px, py):
        return _PAD + (px - x0) * sx, _H - _PAD - (py - y0) * sy

    return to_px, (x0, x1, y0, y1)


def _document(body: list[str], title: str, extent) -> str:
    x0, x1, y0, y1 = extent
    head = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W // 2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<text x="{_PAD}" y="{_H - 10}" font-size="10">x: [{x0:.4g}, {x1:.4g}]  '
        f'y: [{y0:.4g}, {y1:.4g}]</text>',
    ]
    return "\n".join(head + body + ["</svg>"]) + "\n"


def line_plot(x: Sequence[float], series: dict[str, Sequence[float]], title: str = "") -> str:
    """One polyline per named series; NaN values break the line."""
    x = np.asarray(x, dtype=float)
    ys = {k: np.asarray(v, dtype=float) for k, v in series.items()}
    all_y = np.concatenate([v for v in ys.values()]) if ys else np.zeros(1)
    if np.all(np.isnan(all_y)):
        all_y = np.zeros(1)
    to_px, extent = _frame(x, all_y)
    body = []
    for i, (name, y) in enumerate(ys.items()):
        color = _COLORS[i % len(_COLORS)]
        pts = [to_px(px, py) for px, py in zip(x, y) if np.isfinite(py)]
        coords = " ".join(f"{_fmt(u)},{_fmt(v)}" for u, v in pts)
        body.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
        body.append(f'<text x="{_W - _PAD}" y="{40 + 14 * i}" text-anchor="end" '
                    f'font-size="11" fill="{color}">{name}</text>')
    return _document(body, title, extent)


def scatter_plot(points, title: str = "") -> str:
    p = np.asarray(points, dtype=float).reshape(-1, 2)
    to_px, extent = _frame(p[:, 0], p[:, 1], equal=True)
    body = []
    for px, py in p:
        u, v = to_px(px, py)
        body.append(f'<circle cx="{_fmt(u)}" cy="{_fmt(v)}" r="3" fill="{_COLORS[0]}"/>')
    return _document(body, title, extent)
