"""Deterministic SVG rendering of line diagrams."""

from __future__ import annotations

from .core import CrossField
from .lines import LineDiagram

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
)


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def render_svg(diagram: LineDiagram, field: CrossField, cell: int = 24) -> str:
    """Crosses as x glyphs, one polyline per line, sources and sinks as dots.

    Lattice point (x, t) sits at pixel (x * cell, (m + 1 - t) * cell) so time
    runs upward. Output depends only on the inputs.
    """
    n, m = field.n, field.m
    pad = cell
    width, height = (n + 1) * cell + 2 * pad, (m + 1) * cell + 2 * pad

    def px(x, t):
        return pad + x * cell, pad + (m + 1 - t) * cell

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    x0, y0 = px(0, 0)
    x1, y1 = px(n + 1, m + 1)
    out.append(f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" '
               'fill="none" stroke="#999" stroke-width="1"/>')

    for i, line in enumerate(diagram.lines):
        pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in (px(x, t) for x, t in line.vertices))
        color = PALETTE[i % len(PALETTE)]
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2" '
                   f'data-line="{i}"/>')

    r = cell * 0.2
    for x, t in field.points():
        cx, cy = px(x, t)
        out.append(f'<path d="M{_fmt(cx - r)},{_fmt(cy - r)}L{_fmt(cx + r)},{_fmt(cy + r)}'
                   f'M{_fmt(cx - r)},{_fmt(cy + r)}L{_fmt(cx + r)},{_fmt(cy - r)}" '
                   'stroke="black" stroke-width="1.5"/>')

    bd = diagram.boundary
    if bd is not None:
        dot = cell * 0.15
        for x in range(1, n + 1):
            if bd.sources[x - 1]:
                cx, cy = px(x, 0)
                out.append(f'<circle cx="{cx}" cy="{cy}" r="{_fmt(dot)}" fill="black" data-source="{x}"/>')
        for t in range(1, m + 1):
            units = int(bd.sinks[t - 1])
            if units:
                cx, cy = px(0, t)
                out.append(f'<circle cx="{cx}" cy="{cy}" r="{_fmt(dot)}" fill="black" data-sink="{t}" '
                           f'data-units="{units}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
