"""Text, CSV and SVG renderers for campaign results and correlation matrices.

Human-facing output uses fixed 4-decimal formatting so renders are stable and
directly comparable across runs. SVG is plain standalone XML, no dependencies.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .proxy_engine import CampaignReport, CampaignRow, campaign_rows

__all__ = [
    "PlotSpec",
    "render_campaign_table",
    "render_corr_csv",
    "render_trajectory_svg",
    "campaign_trajectory",
]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b")


def _as_rows(source) -> list[CampaignRow]:
    if isinstance(source, CampaignReport):
        return campaign_rows(source)
    return list(source)


def _clamp_pair(li, ui, clamp: bool):
    if not clamp:
        return li, ui
    return (None if li is None else max(li, 0.0),
            None if ui is None else min(ui, 1.0))


def render_campaign_table(source: CampaignReport | Sequence[CampaignRow],
                          clamp: bool = False) -> str:
    """Aligned text table: Iteration | MSF | Accuracy | LI | UI | flag.

    Values print to 4 decimals; rows whose accuracy fell outside the previous
    band carry a trailing '*'. The final row has empty LI/UI cells.
    """
    header = ["Iteration", "MSF", "Accuracy", "LI", "UI", "flag"]
    table = [header]
    for row in _as_rows(source):
        li, ui = _clamp_pair(row.li, row.ui, clamp)
        table.append([
            str(row.iteration),
            row.msf,
            f"{row.accuracy:.4f}",
            "" if li is None else f"{li:.4f}",
            "" if ui is None else f"{ui:.4f}",
            "*" if row.within is False else "",
        ])
    widths = [max(len(r[c]) for r in table) for c in range(len(header))]
    right = (True, False, True, True, True, False)
    lines = []
    for r in table:
        cells = [c.rjust(w) if rj else c.ljust(w)
                 for c, w, rj in zip(r, widths, right)]
        lines.append(" | ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def render_corr_csv(matrix: np.ndarray, names: Sequence[str]) -> str:
    """CSV with a header row and column of names, entries to 4 decimals."""
    matrix = np.asarray(matrix, dtype=np.float64)
    names = list(names)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"correlation matrix must be square, got {matrix.shape}")
    if matrix.shape[0] != len(names):
        raise ValueError(
            f"{len(names)} names for a {matrix.shape[0]}x{matrix.shape[1]} matrix"
        )
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + names)
    for name, row in zip(names, matrix):
        writer.writerow([name] + [f"{v:.4f}" for v in row])
    return buf.getvalue()


@dataclass(frozen=True)
class PlotSpec:
    """What to draw: one or more series, an optional shaded band, labels."""

    title: str
    x_label: str
    y_label: str
    series: tuple[tuple[str, tuple[tuple[float, float], ...]], ...]
    band: tuple[tuple[float, float, float], ...] | None = None
    width: int = 640
    height: int = 400

    def __post_init__(self):
        if not self.series:
            raise ValueError("PlotSpec needs at least one series")
        for name, points in self.series:
            if not points:
                raise ValueError(f"series {name!r} has no points")
            xs = [p[0] for p in points]
            if any(b <= a for a, b in zip(xs, xs[1:])):
                raise ValueError(f"series {name!r} x values must strictly increase")


def campaign_trajectory(r: CampaignReport, clamp: bool = False) -> PlotSpec:
    """Accuracy per iteration, with each iteration's predicted band shaded at
    the iteration it predicts (k's band is drawn at x = k+1)."""
    rows = campaign_rows(r)
    series = tuple((row.iteration, row.accuracy) for row in rows)
    band = []
    for row in rows:
        li, ui = _clamp_pair(row.li, row.ui, clamp)
        if li is not None:
            band.append((row.iteration + 1, li, ui))
    return PlotSpec(
        title=f"{r.mode.value} campaign accuracy",
        x_label="iteration",
        y_label="accuracy",
        series=(("accuracy", series),),
        band=tuple(band) if band else None,
    )


def render_trajectory_svg(spec: PlotSpec) -> str:
    """Standalone SVG: one polyline per series, one polygon when a band is
    present, labeled axes with 5 tick labels each."""
    left, right, top, bottom = 70, 20, 40, 55
    plot_w = spec.width - left - right
    plot_h = spec.height - top - bottom

    xs, ys = [], []
    for _, points in spec.series:
        xs.extend(p[0] for p in points)
        ys.extend(p[1] for p in points)
    for x, lo, hi in spec.band or ():
        xs.append(x)
        ys.extend((lo, hi))
    x_min, x_max = min(xs), max(xs)
    y_min, y_max = min(ys), max(ys)
    if x_max == x_min:
        x_min, x_max = x_min - 1.0, x_max + 1.0
    if y_max == y_min:
        y_min, y_max = y_min - 1.0, y_max + 1.0
    pad = 0.05 * (y_max - y_min)
    y_min, y_max = y_min - pad, y_max + pad

    def sx(x):
        return left + (x - x_min) / (x_max - x_min) * plot_w

    def sy(y):
        return top + (y_max - y) / (y_max - y_min) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{spec.width}" '
        f'height="{spec.height}" viewBox="0 0 {spec.width} {spec.height}">',
        f'<text x="{spec.width / 2:.1f}" y="20" text-anchor="middle" '
        f'font-size="14" font-family="sans-serif">{escape(spec.title)}</text>',
    ]
    if spec.band:
        forward = [f"{sx(x):.2f},{sy(hi):.2f}" for x, _, hi in spec.band]
        backward = [f"{sx(x):.2f},{sy(lo):.2f}" for x, lo, _ in reversed(spec.band)]
        parts.append(
            f'<polygon points="{" ".join(forward + backward)}" '
            f'fill="#c7dcef" fill-opacity="0.6" stroke="none"/>'
        )
    for i, (name, points) in enumerate(spec.series):
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in points)
        color = _PALETTE[i % len(_PALETTE)]
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="1.5"><title>{escape(name)}</title></polyline>'
        )
    axis_y = top + plot_h
    parts.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{axis_y}" '
                 f'stroke="#333" stroke-width="1"/>')
    parts.append(f'<line x1="{left}" y1="{axis_y}" x2="{left + plot_w}" '
                 f'y2="{axis_y}" stroke="#333" stroke-width="1"/>')
    for tick in np.linspace(x_min, x_max, 5):
        parts.append(
            f'<text x="{sx(tick):.2f}" y="{axis_y + 18}" text-anchor="middle" '
            f'font-size="11" font-family="sans-serif">{tick:.4g}</text>'
        )
    for tick in np.linspace(y_min, y_max, 5):
        parts.append(
            f'<text x="{left - 8}" y="{sy(tick) + 4:.2f}" text-anchor="end" '
            f'font-size="11" font-family="sans-serif">{tick:.4g}</text>'
        )
    parts.append(
        f'<text x="{left + plot_w / 2:.1f}" y="{spec.height - 12}" '
        f'text-anchor="middle" font-size="12" font-family="sans-serif">'
        f'{escape(spec.x_label)}</text>'
    )
    parts.append(
        f'<text x="18" y="{top + plot_h / 2:.1f}" text-anchor="middle" '
        f'font-size="12" font-family="sans-serif" '
        f'transform="rotate(-90 18 {top + plot_h / 2:.1f})">'
        f'{escape(spec.y_label)}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
