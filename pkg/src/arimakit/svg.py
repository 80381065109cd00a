"""Standalone SVG fan chart: history, point forecast and nested interval bands."""

from __future__ import annotations

import math
from pathlib import Path

from .errors import DegenerateInput, IoError

WIDTH, HEIGHT = 800, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 30, 50
BAND_FILL = {0: "#9ecae1", 1: "#4292c6", 2: "#2171b5"}


def _num(v: float) -> str:
    return f"{v:.2f}"


def _nice_step(span: float, target: int = 6) -> float:
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for m in (1, 2, 5, 10):
        if raw <= m * mag:
            return m * mag
    return 10 * mag


def svg_string(report) -> str:
    fc = report.forecast
    if fc is None:
        raise DegenerateInput("report has no forecast to draw")
    info = report.input_summary
    hist = info["values"]
    hist_years = list(range(info["start_year"], info["start_year"] + len(hist)))
    years = fc.years
    levels = sorted(fc.intervals, reverse=True)

    floor = min(0.0, min(hist))
    top = max(max(hist), max(max(fc.intervals[lv][1]) for lv in levels), max(fc.point))
    if top <= floor:
        top = floor + 1.0
    x0, x1 = hist_years[0], years[-1]
    span_x = max(x1 - x0, 1)

    def sx(year):
        return LEFT + (year - x0) / span_x * (WIDTH - LEFT - RIGHT)

    def sy(val):
        return TOP + (top - val) / (top - floor) * (HEIGHT - TOP - BOTTOM)

    clipped = False
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<title>{_escape(info["label"])} forecast</title>',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    for i, lv in enumerate(levels):
        lower, upper = fc.intervals[lv]
        low_c = []
        for v in lower:
            if v < floor:
                clipped = True
            low_c.append(max(v, floor))
        pts = [(sx(y), sy(v)) for y, v in zip(years, upper)]
        pts += [(sx(y), sy(v)) for y, v in reversed(list(zip(years, low_c)))]
        coords = " ".join(f"{_num(a)},{_num(b)}" for a, b in pts)
        out.append(
            f'<polygon class="band" data-level="{lv:g}" fill="{BAND_FILL.get(i, "#08519c")}" '
            f'fill-opacity="0.6" stroke="none" points="{coords}"/>'
        )

    hist_pts = " ".join(f"{_num(sx(y))},{_num(sy(v))}" for y, v in zip(hist_years, hist))
    out.append(f'<polyline class="history" fill="none" stroke="black" stroke-width="1.5" points="{hist_pts}"/>')
    fc_pts = [(hist_years[-1], hist[-1])] + list(zip(years, fc.point))
    fc_str = " ".join(f"{_num(sx(y))},{_num(sy(v))}" for y, v in fc_pts)
    out.append(f'<polyline class="forecast" fill="none" stroke="#08306b" stroke-width="2" points="{fc_str}"/>')

    base = sy(floor)
    out.append(f'<line class="axis" x1="{LEFT}" y1="{_num(base)}" x2="{WIDTH - RIGHT}" y2="{_num(base)}" stroke="black"/>')
    out.append(f'<line class="axis" x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{_num(base)}" stroke="black"/>')
    ystep = _nice_step(top - floor)
    tick = floor
    while tick <= top + 1e-9:
        y = sy(tick)
        out.append(f'<text class="ylabel" x="{LEFT - 6}" y="{_num(y + 4)}" text-anchor="end" font-size="11">{tick:g}</text>')
        tick += ystep
    xstep = max(1, int(_nice_step(span_x, 8)))
    for year in range(x0, x1 + 1):
        if (year - x0) % xstep == 0:
            out.append(
                f'<text class="xlabel" x="{_num(sx(year))}" y="{_num(base + 18)}" '
                f'text-anchor="middle" font-size="11">{year}</text>'
            )
    legend = ", ".join(f"{lv:.0%}" for lv in sorted(levels))
    out.append(f'<text class="legend" x="{LEFT + 6}" y="{TOP - 10}" font-size="12">Prediction intervals: {legend}</text>')
    if clipped:
        out.append(
            f'<text class="warning" x="{WIDTH - RIGHT}" y="{TOP - 10}" text-anchor="end" '
            f'font-size="12" fill="#b30000">lower bounds below {floor:g} clipped at the axis</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_svg(report, path) -> None:
    content = svg_string(report)
    try:
        Path(path).write_text(content, encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from exc
