"""Deterministic server-side SVG rendering of chart specifications.

Pure string assembly: identical specs yield byte-identical SVG 1.1 documents
(800x450 viewBox, fixed palette, legend on the right). Every data point is
drawn as exactly one element marked ``class="pt"``; series-level strokes,
axes, and chrome carry other classes. Missing (null) points draw nothing.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

from .errors import ChartDataError
from .model import IdiomType, is_missing, parse_number
from .render import ChartSpec

WIDTH = 800
HEIGHT = 450
PX0, PY0, PX1, PY1 = 60.0, 56.0, 610.0, 396.0  # plot rectangle
PW = PX1 - PX0
PH = PY1 - PY0
LEGEND_X = 628.0

PALETTE = (
    "#4e79a7",
    "#f28e2b",
    "#e15759",
    "#76b7b2",
    "#59a14f",
    "#edc949",
    "#b07aa1",
    "#ff9da7",
    "#9c755f",
    "#bab0ac",
)

HEAT_LOW = (0xF7, 0xFB, 0xFF)
HEAT_HIGH = (0x08, 0x30, 0x6B)


def _esc(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _f(v: float) -> str:
    return f"{v:.2f}"


def _tick(v: float) -> str:
    return f"{v:g}"


def _color(i: int) -> str:
    return PALETTE[i % len(PALETTE)]


def _value_range(
    values: Sequence[Optional[float]], include_zero: bool = True
) -> tuple[float, float]:
    present = [v for v in values if v is not None]
    if not present:
        return (0.0, 1.0)
    lo, hi = min(present), max(present)
    if include_zero:
        lo = min(lo, 0.0)
        hi = max(hi, 0.0)
    if lo == hi:
        hi = lo + 1.0
    return (lo, hi)


def _sy(v: float, lo: float, hi: float) -> float:
    return PY1 - (v - lo) / (hi - lo) * PH


def _slot_center(i: int, n: int) -> float:
    return PX0 + (i + 0.5) * PW / n


def _x_number(spec: ChartSpec, i: int) -> Optional[float]:
    """Numeric reading of an x cell (scatter, histogram)."""
    cell = spec.categories[i]
    if is_missing(cell):
        return None
    try:
        return parse_number(cell)
    except ValueError:
        raise ChartDataError(
            f"x value {cell!r} at row {i} is not a number for {spec.idiom.label}"
        ) from None


def _y_axis(lo: float, hi: float) -> list[str]:
    parts = []
    for i in range(5):
        v = lo + i * (hi - lo) / 4
        y = _sy(v, lo, hi)
        parts.append(
            f'<line class="grid" x1="{_f(PX0)}" y1="{_f(y)}" x2="{_f(PX1)}" '
            f'y2="{_f(y)}" stroke="#e0e0e0" stroke-width="1"/>'
        )
        parts.append(
            f'<text class="tick" x="{_f(PX0 - 6)}" y="{_f(y + 4)}" '
            f'text-anchor="end" font-size="11" fill="#555">{_esc(_tick(v))}</text>'
        )
    parts.append(
        f'<line class="axis" x1="{_f(PX0)}" y1="{_f(PY0)}" x2="{_f(PX0)}" '
        f'y2="{_f(PY1)}" stroke="#333" stroke-width="1"/>'
    )
    parts.append(
        f'<line class="axis" x1="{_f(PX0)}" y1="{_f(PY1)}" x2="{_f(PX1)}" '
        f'y2="{_f(PY1)}" stroke="#333" stroke-width="1"/>'
    )
    return parts


def _category_labels(labels: Sequence[str]) -> list[str]:
    n = len(labels)
    if n == 0:
        return []
    step = max(1, math.ceil(n / 12))
    parts = []
    for i in range(0, n, step):
        cx = _slot_center(i, n)
        parts.append(
            f'<text class="xlabel" x="{_f(cx)}" y="{_f(PY1 + 16)}" '
            f'text-anchor="middle" font-size="11" fill="#555">{_esc(labels[i])}</text>'
        )
    return parts


def _legend(entries: Sequence[tuple[str, str]]) -> list[str]:
    parts = []
    shown = entries[:14]
    for i, (label, color) in enumerate(shown):
        y = 70.0 + i * 20
        parts.append(
            f'<rect class="swatch" x="{_f(LEGEND_X)}" y="{_f(y)}" width="12" '
            f'height="12" fill="{color}"/>'
        )
        parts.append(
            f'<text class="legend" x="{_f(LEGEND_X + 18)}" y="{_f(y + 10)}" '
            f'font-size="12" fill="#333">{_esc(label)}</text>'
        )
    if len(entries) > len(shown):
        y = 70.0 + len(shown) * 20
        parts.append(
            f'<text class="legend" x="{_f(LEGEND_X)}" y="{_f(y + 10)}" '
            f'font-size="12" fill="#333">+{len(entries) - len(shown)} more</text>'
        )
    return parts


# ---------------------------------------------------------------------------
# Idiom painters


def _bars(spec: ChartSpec) -> list[str]:
    grouped = spec.idiom is IdiomType.GROUPED_BAR_CHART or (
        spec.idiom is IdiomType.BAR_CHART and len(spec.series) > 1
    )
    n = max(1, len(spec.categories))
    all_points = [p for s in spec.series for p in s.points]
    lo, hi = _value_range(all_points)
    parts = _y_axis(lo, hi)
    zero_y = _sy(max(min(0.0, hi), lo), lo, hi)
    m = max(1, len(spec.series))
    slot = PW / n
    if grouped:
        bar_w = slot * 0.8 / m
    else:
        bar_w = slot * 0.6
    for si, series in enumerate(spec.series):
        for ci, point in enumerate(series.points):
            if point is None:
                continue
            if grouped:
                x = PX0 + ci * slot + slot * 0.1 + si * bar_w
            else:
                x = _slot_center(ci, n) - bar_w / 2
            y = _sy(point, lo, hi)
            top, bottom = min(y, zero_y), max(y, zero_y)
            parts.append(
                f'<rect class="pt" x="{_f(x)}" y="{_f(top)}" width="{_f(bar_w)}" '
                f'height="{_f(bottom - top)}" fill="{_color(si)}"/>'
            )
    parts.extend(_category_labels(spec.categories))
    parts.extend(_legend([(s.name, _color(i)) for i, s in enumerate(spec.series)]))
    return parts


def _stacked_bars(spec: ChartSpec) -> list[str]:
    n = max(1, len(spec.categories))
    pos_sums = []
    neg_sums = []
    for ci in range(len(spec.categories)):
        pos = sum(s.points[ci] for s in spec.series if s.points[ci] is not None and s.points[ci] > 0)
        neg = sum(s.points[ci] for s in spec.series if s.points[ci] is not None and s.points[ci] < 0)
        pos_sums.append(pos)
        neg_sums.append(neg)
    lo, hi = _value_range([*pos_sums, *neg_sums] or [0.0])
    parts = _y_axis(lo, hi)
    slot = PW / n
    bar_w = slot * 0.6
    for ci in range(len(spec.categories)):
        up = 0.0
        down = 0.0
        x = _slot_center(ci, n) - bar_w / 2
        for si, series in enumerate(spec.series):
            point = series.points[ci]
            if point is None:
                continue
            if point >= 0:
                y0, y1 = up, up + point
                up += point
            else:
                y0, y1 = down + point, down
                down += point
            top = _sy(max(y0, y1), lo, hi)
            bottom = _sy(min(y0, y1), lo, hi)
            parts.append(
                f'<rect class="pt" x="{_f(x)}" y="{_f(top)}" width="{_f(bar_w)}" '
                f'height="{_f(bottom - top)}" fill="{_color(si)}"/>'
            )
    parts.extend(_category_labels(spec.categories))
    parts.extend(_legend([(s.name, _color(i)) for i, s in enumerate(spec.series)]))
    return parts


def _runs(points: Sequence[Optional[float]]) -> list[list[int]]:
    runs: list[list[int]] = []
    current: list[int] = []
    for i, p in enumerate(points):
        if p is None:
            if current:
                runs.append(current)
                current = []
        else:
            current.append(i)
    if current:
        runs.append(current)
    return runs


def _lines(spec: ChartSpec, filled: bool) -> list[str]:
    n = max(1, len(spec.categories))
    all_points = [p for s in spec.series for p in s.points]
    lo, hi = _value_range(all_points)
    parts = _y_axis(lo, hi)
    base = _sy(max(min(0.0, hi), lo), lo, hi)
    for si, series in enumerate(spec.series):
        color = _color(si)
        for run in _runs(series.points):
            coords = [(_slot_center(i, n), _sy(series.points[i], lo, hi)) for i in run]
            if filled and len(coords) >= 2:
                d = f"M {_f(coords[0][0])} {_f(base)} " + " ".join(
                    f"L {_f(x)} {_f(y)}" for x, y in coords
                )
                d += f" L {_f(coords[-1][0])} {_f(base)} Z"
                parts.append(
                    f'<path class="area" d="{d}" fill="{color}" fill-opacity="0.25" '
                    f'stroke="none"/>'
                )
            if len(coords) >= 2:
                pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in coords)
                parts.append(
                    f'<polyline class="series" points="{pts}" fill="none" '
                    f'stroke="{color}" stroke-width="2"/>'
                )
        for i, point in enumerate(series.points):
            if point is None:
                continue
            parts.append(
                f'<circle class="pt" cx="{_f(_slot_center(i, n))}" '
                f'cy="{_f(_sy(point, lo, hi))}" r="3" fill="{color}"/>'
            )
    parts.extend(_category_labels(spec.categories))
    parts.extend(_legend([(s.name, _color(i)) for i, s in enumerate(spec.series)]))
    return parts


def _pie(spec: ChartSpec, donut: bool) -> list[str]:
    series = spec.series[0]
    cx = (PX0 + PX1) / 2
    cy = (PY0 + PY1) / 2
    r = min(PW, PH) / 2 - 8
    r_in = r * 0.55
    values = [(i, p) for i, p in enumerate(series.points) if p is not None]
    total = sum(p for _, p in values)
    parts: list[str] = []
    if total <= 0:
        return parts
    cum = 0.0
    for i, value in values:
        frac = value / total
        color = _color(i)
        if frac >= 1.0:
            parts.append(
                f'<circle class="pt" cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}" '
                f'fill="{color}"/>'
            )
            if donut:
                parts.append(
                    f'<circle class="hole" cx="{_f(cx)}" cy="{_f(cy)}" '
                    f'r="{_f(r_in)}" fill="#ffffff"/>'
                )
            cum += value
            continue
        a0 = -math.pi / 2 + 2 * math.pi * (cum / total)
        a1 = -math.pi / 2 + 2 * math.pi * ((cum + value) / total)
        x0, y0 = cx + r * math.cos(a0), cy + r * math.sin(a0)
        x1, y1 = cx + r * math.cos(a1), cy + r * math.sin(a1)
        laf = 1 if frac > 0.5 else 0
        if value == 0:
            d = f"M {_f(cx)} {_f(cy)} Z"
        elif donut:
            ix0, iy0 = cx + r_in * math.cos(a0), cy + r_in * math.sin(a0)
            ix1, iy1 = cx + r_in * math.cos(a1), cy + r_in * math.sin(a1)
            d = (
                f"M {_f(x0)} {_f(y0)} A {_f(r)} {_f(r)} 0 {laf} 1 {_f(x1)} {_f(y1)} "
                f"L {_f(ix1)} {_f(iy1)} A {_f(r_in)} {_f(r_in)} 0 {laf} 0 "
                f"{_f(ix0)} {_f(iy0)} Z"
            )
        else:
            d = (
                f"M {_f(cx)} {_f(cy)} L {_f(x0)} {_f(y0)} "
                f"A {_f(r)} {_f(r)} 0 {laf} 1 {_f(x1)} {_f(y1)} Z"
            )
        parts.append(f'<path class="pt" d="{d}" fill="{color}"/>')
        cum += value
    labels = [
        (spec.categories[i] if i < len(spec.categories) else f"row {i}", _color(i))
        for i, _ in values
    ]
    parts.extend(_legend(labels))
    return parts


def _scatter(spec: ChartSpec) -> list[str]:
    series = spec.series[0]
    xs = [_x_number(spec, i) for i in range(len(spec.categories))]
    present_x = [x for x in xs if x is not None]
    x_lo, x_hi = _value_range(present_x or [0.0], include_zero=False)
    y_lo, y_hi = _value_range(series.points)
    parts = _y_axis(y_lo, y_hi)
    for i in range(5):
        v = x_lo + i * (x_hi - x_lo) / 4
        x = PX0 + (v - x_lo) / (x_hi - x_lo) * PW
        parts.append(
            f'<text class="tick" x="{_f(x)}" y="{_f(PY1 + 16)}" '
            f'text-anchor="middle" font-size="11" fill="#555">{_esc(_tick(v))}</text>'
        )
    for i, point in enumerate(series.points):
        x_val = xs[i] if i < len(xs) else None
        if point is None or x_val is None:
            continue
        x = PX0 + (x_val - x_lo) / (x_hi - x_lo) * PW
        parts.append(
            f'<circle class="pt" cx="{_f(x)}" cy="{_f(_sy(point, y_lo, y_hi))}" '
            f'r="4" fill="{_color(0)}" fill-opacity="0.8"/>'
        )
    parts.extend(_legend([(series.name, _color(0))]))
    return parts


def _histogram(spec: ChartSpec) -> list[str]:
    values = [
        v
        for v in (_x_number(spec, i) for i in range(len(spec.categories)))
        if v is not None
    ]
    parts: list[str] = []
    if not values:
        return _y_axis(0.0, 1.0)
    lo, hi = min(values), max(values)
    if lo == hi:
        edges = [lo, lo + 1.0]
    else:
        bins = 10
        width = (hi - lo) / bins
        edges = [lo + i * width for i in range(bins + 1)]
    counts = [0] * (len(edges) - 1)
    for v in values:
        idx = min(int((v - edges[0]) / (edges[1] - edges[0])), len(counts) - 1)
        counts[idx] += 1
    c_lo, c_hi = _value_range([float(c) for c in counts])
    parts.extend(_y_axis(c_lo, c_hi))
    n = len(counts)
    slot = PW / n
    for i, count in enumerate(counts):
        x = PX0 + i * slot + slot * 0.05
        y = _sy(float(count), c_lo, c_hi)
        parts.append(
            f'<rect class="bin" x="{_f(x)}" y="{_f(y)}" width="{_f(slot * 0.9)}" '
            f'height="{_f(PY1 - y)}" fill="{_color(0)}"/>'
        )
        parts.append(
            f'<text class="xlabel" x="{_f(x + slot * 0.45)}" y="{_f(PY1 + 16)}" '
            f'text-anchor="middle" font-size="10" fill="#555">'
            f"{_esc(_tick(edges[i]))}</text>"
        )
    return parts


def _quartiles(sorted_vals: list[float]) -> tuple[float, float, float]:
    def median(vals: list[float]) -> float:
        k = len(vals)
        mid = k // 2
        return vals[mid] if k % 2 else (vals[mid - 1] + vals[mid]) / 2

    med = median(sorted_vals)
    half = len(sorted_vals) // 2
    lower = sorted_vals[:half] or sorted_vals[:1]
    upper = sorted_vals[-half:] if half else sorted_vals[-1:]
    return median(lower), med, median(upper)


def _box(spec: ChartSpec) -> list[str]:
    series = spec.series[0]
    groups: dict[str, list[float]] = {}
    order: list[str] = []
    for i, point in enumerate(series.points):
        if point is None or i >= len(spec.categories):
            continue
        key = spec.categories[i]
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(point)
    all_vals = [v for vals in groups.values() for v in vals]
    lo, hi = _value_range(all_vals or [0.0], include_zero=False)
    parts = _y_axis(lo, hi)
    n = max(1, len(order))
    slot = PW / n
    for gi, key in enumerate(order):
        vals = sorted(groups[key])
        q1, med, q3 = _quartiles(vals)
        v_lo, v_hi = vals[0], vals[-1]
        cx = _slot_center(gi, n)
        w = slot * 0.4
        parts.append(
            f'<line class="whisker" x1="{_f(cx)}" y1="{_f(_sy(v_lo, lo, hi))}" '
            f'x2="{_f(cx)}" y2="{_f(_sy(v_hi, lo, hi))}" stroke="#333" stroke-width="1"/>'
        )
        top = _sy(q3, lo, hi)
        bottom = _sy(q1, lo, hi)
        parts.append(
            f'<rect class="box" x="{_f(cx - w / 2)}" y="{_f(top)}" width="{_f(w)}" '
            f'height="{_f(max(bottom - top, 1.0))}" fill="{_color(0)}" '
            f'fill-opacity="0.6" stroke="#333"/>'
        )
        parts.append(
            f'<line class="median" x1="{_f(cx - w / 2)}" y1="{_f(_sy(med, lo, hi))}" '
            f'x2="{_f(cx + w / 2)}" y2="{_f(_sy(med, lo, hi))}" stroke="#333" '
            f'stroke-width="2"/>'
        )
    parts.extend(_category_labels(order))
    return parts


def _heat_color(t: float) -> str:
    r = round(HEAT_LOW[0] + (HEAT_HIGH[0] - HEAT_LOW[0]) * t)
    g = round(HEAT_LOW[1] + (HEAT_HIGH[1] - HEAT_LOW[1]) * t)
    b = round(HEAT_LOW[2] + (HEAT_HIGH[2] - HEAT_LOW[2]) * t)
    return f"#{r:02x}{g:02x}{b:02x}"


def _heatmap(spec: ChartSpec) -> list[str]:
    n = max(1, len(spec.categories))
    m = max(1, len(spec.series))
    all_points = [p for s in spec.series for p in s.points if p is not None]
    lo, hi = (min(all_points), max(all_points)) if all_points else (0.0, 1.0)
    span = hi - lo if hi > lo else 1.0
    cell_w = PW / n
    cell_h = PH / m
    parts: list[str] = []
    for si, series in enumerate(spec.series):
        for ci, point in enumerate(series.points):
            if point is None:
                continue
            t = (point - lo) / span
            x = PX0 + ci * cell_w
            y = PY0 + si * cell_h
            parts.append(
                f'<rect class="pt" x="{_f(x)}" y="{_f(y)}" width="{_f(cell_w)}" '
                f'height="{_f(cell_h)}" fill="{_heat_color(t)}" stroke="#ffffff"/>'
            )
        parts.append(
            f'<text class="ylabel" x="{_f(PX0 - 6)}" '
            f'y="{_f(PY0 + (si + 0.5) * cell_h + 4)}" text-anchor="end" '
            f'font-size="11" fill="#555">{_esc(series.name)}</text>'
        )
    parts.extend(_category_labels(spec.categories))
    return parts


# ---------------------------------------------------------------------------


def export_chart_svg(spec: ChartSpec) -> bytes:
    """Standalone SVG for the chart specification; byte-identical on repeat."""
    body: list[str]
    if spec.idiom in (IdiomType.BAR_CHART, IdiomType.GROUPED_BAR_CHART):
        body = _bars(spec)
    elif spec.idiom is IdiomType.STACKED_BAR_CHART:
        body = _stacked_bars(spec)
    elif spec.idiom is IdiomType.LINE_CHART:
        body = _lines(spec, filled=False)
    elif spec.idiom is IdiomType.AREA_CHART:
        body = _lines(spec, filled=True)
    elif spec.idiom is IdiomType.PIE_CHART:
        body = _pie(spec, donut=False)
    elif spec.idiom is IdiomType.DONUT_CHART:
        body = _pie(spec, donut=True)
    elif spec.idiom is IdiomType.SCATTER_PLOT:
        body = _scatter(spec)
    elif spec.idiom is IdiomType.HISTOGRAM:
        body = _histogram(spec)
    elif spec.idiom is IdiomType.BOX_PLOT:
        body = _box(spec)
    elif spec.idiom is IdiomType.HEATMAP:
        body = _heatmap(spec)
    else:
        raise ChartDataError(f"unsupported idiom: {spec.idiom.value}")

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">',
        f'<rect class="bg" x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
    ]
    if spec.labels.title:
        parts.append(
            f'<text class="title" x="{_f((PX0 + PX1) / 2)}" y="30" '
            f'text-anchor="middle" font-size="18" fill="#111">'
            f"{_esc(spec.labels.title)}</text>"
        )
    parts.extend(body)
    if spec.labels.x_label:
        parts.append(
            f'<text class="axis-label" x="{_f((PX0 + PX1) / 2)}" y="{_f(HEIGHT - 10)}" '
            f'text-anchor="middle" font-size="12" fill="#333">'
            f"{_esc(spec.labels.x_label)}</text>"
        )
    if spec.labels.y_label:
        parts.append(
            f'<text class="axis-label" x="16" y="{_f((PY0 + PY1) / 2)}" '
            f'text-anchor="middle" font-size="12" fill="#333" '
            f'transform="rotate(-90 16 {_f((PY0 + PY1) / 2)})">'
            f"{_esc(spec.labels.y_label)}</text>"
        )
    parts.append("</svg>")
    return "\n".join(parts).encode("utf-8")
