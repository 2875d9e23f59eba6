"""
SVG line charts with no plotting dependency

Fixed 800x600 canvas, linear axes, a 12-color palette, legend, axis labels
and a parameter stamp. Monte-Carlo overlays are drawn as markers with
error bars. Output is plain SVG 1.1 text and fully deterministic.
"""

import math
from collections.abc import Callable

from pydantic import BaseModel, Field

WIDTH = 800
HEIGHT = 600
MARGIN_LEFT = 80
MARGIN_RIGHT = 190
MARGIN_TOP = 60
MARGIN_BOTTOM = 90

Scale = Callable[[float], float]

PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#ff7f0e",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
    "#bcbd22",
    "#17becf",
    "#393b79",
    "#637939",
)


class ChartSeries(BaseModel):
    """One curve; None y-values break the line"""

    label: str
    x: list[float]
    y: list[float | None]
    errors: list[float | None] | None = None
    markers_only: bool = False
    color_index: int | None = None


class LineChart(BaseModel):
    title: str
    x_label: str
    y_label: str
    series: list[ChartSeries] = Field(default_factory=list)
    stamp: str = ""


def _esc(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _nice_step(span: float, target: int = 6) -> float:
    raw = span / target
    magnitude = 10.0 ** math.floor(math.log10(raw))
    for factor in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= factor * magnitude:
            return factor * magnitude
    return 10.0 * magnitude


def _ticks(lo: float, hi: float) -> list[float]:
    step = _nice_step(hi - lo)
    first = math.ceil(lo / step - 1e-9)
    last = math.floor(hi / step + 1e-9)
    return [round(k * step, 10) for k in range(first, last + 1)]


def _tick_label(value: float) -> str:
    text = f"{value:.6g}"
    return "0" if text == "-0" else text


def _bounds(chart: LineChart) -> tuple[float, float, float, float]:
    xs: list[float] = []
    ys: list[float] = []
    for s in chart.series:
        errs = s.errors or [None] * len(s.y)
        for x, y, e in zip(s.x, s.y, errs, strict=True):
            if y is None:
                continue
            xs.append(x)
            spread = e or 0.0
            ys.extend((y - spread, y + spread))
    if not xs:
        return 0.0, 1.0, 0.0, 1.0

    x_min, x_max = min(xs), max(xs)
    if x_max <= x_min:
        x_min, x_max = x_min - 1.0, x_max + 1.0
    y_min, y_max = min(min(ys), 0.0), max(ys)
    if y_max <= y_min:
        y_max = y_min + 1.0
    y_max += 0.05 * (y_max - y_min)
    return x_min, x_max, y_min, y_max


def render_line_chart(chart: LineChart) -> str:
    """Return the chart as a self-contained SVG document."""
    plot_left, plot_right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    plot_top, plot_bottom = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM
    x_min, x_max, y_min, y_max = _bounds(chart)

    def px(x: float) -> float:
        return plot_left + (x - x_min) / (x_max - x_min) * (plot_right - plot_left)

    def py(y: float) -> float:
        return plot_bottom - (y - y_min) / (y_max - y_min) * (plot_bottom - plot_top)

    out: list[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f"<title>{_esc(chart.title)}</title>",
        '<rect x="0" y="0" width="100%" height="100%" fill="#ffffff"/>',
        f'<text x="{(plot_left + plot_right) / 2:.1f}" y="32" text-anchor="middle" '
        f'font-size="18" font-family="Arial">{_esc(chart.title)}</text>',
    ]

    # grid and ticks
    for value in _ticks(y_min, y_max):
        y = py(value)
        out.append(
            f'<line x1="{plot_left}" y1="{y:.2f}" x2="{plot_right}" y2="{y:.2f}" '
            'stroke="#e0e0e0" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{plot_left - 8}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-size="12" font-family="Arial">{_tick_label(value)}</text>'
        )
    for value in _ticks(x_min, x_max):
        x = px(value)
        out.append(
            f'<line x1="{x:.2f}" y1="{plot_bottom}" x2="{x:.2f}" y2="{plot_bottom + 5}" '
            'stroke="#000000" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{x:.2f}" y="{plot_bottom + 20}" text-anchor="middle" '
            f'font-size="12" font-family="Arial">{_tick_label(value)}</text>'
        )

    out.append(
        f'<line x1="{plot_left}" y1="{plot_bottom}" x2="{plot_right}" y2="{plot_bottom}" '
        'stroke="#000000" stroke-width="1.5"/>'
    )
    out.append(
        f'<line x1="{plot_left}" y1="{plot_top}" x2="{plot_left}" y2="{plot_bottom}" '
        'stroke="#000000" stroke-width="1.5"/>'
    )

    for idx, s in enumerate(chart.series):
        color = PALETTE[(s.color_index if s.color_index is not None else idx) % len(PALETTE)]
        out.extend(_series_elements(s, color, px, py))

        ly = plot_top + 12 + idx * 20
        lx = plot_right + 16
        if s.markers_only:
            out.append(f'<circle cx="{lx + 12}" cy="{ly}" r="3" fill="{color}"/>')
        else:
            out.append(
                f'<line x1="{lx}" y1="{ly}" x2="{lx + 24}" y2="{ly}" '
                f'stroke="{color}" stroke-width="2"/>'
            )
        out.append(
            f'<text x="{lx + 30}" y="{ly + 4}" font-size="12" '
            f'font-family="Arial">{_esc(s.label)}</text>'
        )

    mid_y = (plot_top + plot_bottom) / 2
    out.append(
        f'<text x="{(plot_left + plot_right) / 2:.1f}" y="{plot_bottom + 45}" '
        f'text-anchor="middle" font-size="14" font-family="Arial">{_esc(chart.x_label)}</text>'
    )
    out.append(
        f'<text x="22" y="{mid_y:.1f}" text-anchor="middle" font-size="14" '
        f'font-family="Arial" transform="rotate(-90 22 {mid_y:.1f})">'
        f"{_esc(chart.y_label)}</text>"
    )
    if chart.stamp:
        out.append(
            f'<text x="{plot_left}" y="{HEIGHT - 18}" font-size="11" fill="#555555" '
            f'font-family="Arial">{_esc(chart.stamp)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _series_elements(
    s: ChartSeries, color: str, px: Scale, py: Scale
) -> list[str]:
    elements: list[str] = []
    if s.markers_only:
        errs = s.errors or [None] * len(s.y)
        for x, y, e in zip(s.x, s.y, errs, strict=True):
            if y is None:
                continue
            if e:
                elements.append(
                    f'<line x1="{px(x):.2f}" y1="{py(y - e):.2f}" x2="{px(x):.2f}" '
                    f'y2="{py(y + e):.2f}" stroke="{color}" stroke-width="1"/>'
                )
            elements.append(
                f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="3" fill="{color}"/>'
            )
        return elements

    segment: list[str] = []
    for x, y in zip(s.x, s.y, strict=True):
        if y is None:
            if segment:
                elements.append(_polyline(segment, color))
            segment = []
            continue
        segment.append(f"{px(x):.2f},{py(y):.2f}")
    if segment:
        elements.append(_polyline(segment, color))
    return elements


def _polyline(points: list[str], color: str) -> str:
    return (
        f'<polyline fill="none" stroke="{color}" stroke-width="2" '
        f'points="{" ".join(points)}"/>'
    )
