"""Minimal deterministic SVG rendering for configurations and grids.

Hand-rolled on purpose: the CLI promises byte-identical output for identical
inputs, so every float is formatted through one fixed function and nothing
here depends on a plotting library or emits timestamps or generated ids.
SVG y grows downward; all renderers flip the physical y axis.
"""

from __future__ import annotations

import numpy as np

from .polyconfig import ARC, PolyConfig

FLUID_FILL = ("#7fa7d0", "#f2b56b", "#86c08a")
FLUID_FILL_FROZEN = ("#5d83ad", "#c98f4e", "#699c6d")
PAIR_STROKE = {(0, 1): "#3b6fb3", (0, 2): "#2e8b57", (1, 2): "#c23b3b"}


def _fmt(x: float) -> str:
    out = f"{float(x):.6g}"
    return "0" if out == "-0" else out


def _document(xmin: float, ymin: float, span_x: float, span_y: float, body: list[str]) -> str:
    head = (
        '<svg xmlns="http://www.w3.org/2000/svg" width="640" height="640" '
        f'viewBox="{_fmt(xmin)} {_fmt(ymin)} {_fmt(span_x)} {_fmt(span_y)}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def render_grid(grid, triple_points=()) -> str:
    """Cell labels as row-run rectangles, frozen cells shaded darker."""
    h = grid.h
    half_w = 0.5 * grid.width * h
    half_h = 0.5 * grid.height * h
    body = [
        f'<rect x="{_fmt(-half_w)}" y="{_fmt(-half_h)}" width="{_fmt(2 * half_w)}" '
        f'height="{_fmt(2 * half_h)}" fill="#ffffff"/>'
    ]
    for row in range(grid.height):
        y_top = -(row + 1) * h + half_h  # physical top edge of the row, flipped
        col = 0
        while col < grid.width:
            if not grid.domain_mask[row, col]:
                col += 1
                continue
            label = grid.labels[row, col]
            frozen = grid.frozen_mask[row, col]
            run = col + 1
            while (
                run < grid.width
                and grid.domain_mask[row, run]
                and grid.labels[row, run] == label
                and grid.frozen_mask[row, run] == frozen
            ):
                run += 1
            fill = (FLUID_FILL_FROZEN if frozen else FLUID_FILL)[label]
            body.append(
                f'<rect x="{_fmt(col * h - half_w)}" y="{_fmt(y_top)}" '
                f'width="{_fmt((run - col) * h)}" height="{_fmt(h)}" fill="{fill}"/>'
            )
            col = run
    for x, y in triple_points:
        body.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(-y)}" r="{_fmt(3 * h)}" '
            'fill="none" stroke="#000000" stroke-width="{0}"/>'.format(_fmt(h))
        )
    pad = 2 * h
    return _document(
        -half_w - pad, -half_h - pad, 2 * (half_w + pad), 2 * (half_h + pad), body
    )


def _arc_path(a, b, radius: float) -> str:
    # counter-clockwise (physical) arc from a to b; flipped y makes it
    # sweep-flag 0 in SVG coordinates
    return (
        f"M {_fmt(a[0])} {_fmt(-a[1])} "
        f"A {_fmt(radius)} {_fmt(radius)} 0 0 0 {_fmt(b[0])} {_fmt(-b[1])}"
    )


def render_polyconfig(c: PolyConfig, markers=()) -> str:
    """Interfaces as colored polylines on the domain circle."""
    radius = c.domain_radius
    stroke_w = radius / 160.0
    body = [
        f'<circle cx="0" cy="0" r="{_fmt(radius)}" fill="#ffffff" '
        f'stroke="#888888" stroke-width="{_fmt(stroke_w)}"/>'
    ]
    for itf in c.interfaces:
        color = PAIR_STROKE[itf.pair]
        pts = " ".join(f"{_fmt(p[0])},{_fmt(-p[1])}" for p in itf.points)
        body.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="{_fmt(2 * stroke_w)}"/>'
        )
    if c.regions is not None:
        for loop in c.regions:
            for a, b, kind in loop.edges():
                if kind == ARC:
                    body.append(
                        f'<path d="{_arc_path(a, b, radius)}" fill="none" '
                        f'stroke="#bbbbbb" stroke-width="{_fmt(stroke_w)}"/>'
                    )
    for x, y in markers:
        body.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(-y)}" r="{_fmt(4 * stroke_w)}" '
            'fill="#000000"/>'
        )
    pad = 0.06 * radius
    return _document(
        -radius - pad, -radius - pad, 2 * (radius + pad), 2 * (radius + pad), body
    )


def render_cone(cone, disk_radius: float = 1.0) -> str:
    """Sectors as filled wedges, rays as junction spokes."""
    r = disk_radius
    body = []
    for sector in cone.sectors:
        a0, a1 = sector.start, sector.end
        p0 = (r * np.cos(a0), r * np.sin(a0))
        p1 = (r * np.cos(a1), r * np.sin(a1))
        large = 1 if (a1 - a0) > np.pi else 0
        path = (
            f"M 0 0 L {_fmt(p0[0])} {_fmt(-p0[1])} "
            f"A {_fmt(r)} {_fmt(r)} 0 {large} 0 {_fmt(p1[0])} {_fmt(-p1[1])} Z"
        )
        body.append(
            f'<path d="{path}" fill="{FLUID_FILL[sector.label]}" '
            f'stroke="#555555" stroke-width="{_fmt(r / 200.0)}"/>'
        )
    pad = 0.06 * r
    return _document(-r - pad, -r - pad, 2 * (r + pad), 2 * (r + pad), body)


def render_curves(
    xs,
    series: list[tuple[str, np.ndarray, str]],
    x_label: str,
    y_label: str,
) -> str:
    """A small line plot: named series over a shared abscissa.

    ``series`` holds (name, values, color) triples.  Axes are linear with
    4% margins; tick labels at the extremes only — enough to read trends
    from a diffable file without a plotting dependency.
    """
    xs = np.asarray(xs, dtype=float)
    ys_all = np.concatenate([np.asarray(v, dtype=float) for _, v, _ in series])
    x_lo, x_hi = float(xs.min()), float(xs.max())
    y_lo, y_hi = float(ys_all.min()), float(ys_all.max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    width, height, margin = 640.0, 480.0, 64.0

    def map_x(v: float) -> float:
        return margin + (v - x_lo) / (x_hi - x_lo) * (width - 2 * margin)

    def map_y(v: float) -> float:
        return height - margin - (v - y_lo) / (y_hi - y_lo) * (height - 2 * margin)

    body = [
        f'<rect x="0" y="0" width="{_fmt(width)}" height="{_fmt(height)}" fill="#ffffff"/>',
        f'<line x1="{_fmt(margin)}" y1="{_fmt(height - margin)}" x2="{_fmt(width - margin)}" '
        f'y2="{_fmt(height - margin)}" stroke="#333333" stroke-width="1"/>',
        f'<line x1="{_fmt(margin)}" y1="{_fmt(margin)}" x2="{_fmt(margin)}" '
        f'y2="{_fmt(height - margin)}" stroke="#333333" stroke-width="1"/>',
        f'<text x="{_fmt(width / 2)}" y="{_fmt(height - margin / 4)}" font-size="14" '
        f'text-anchor="middle">{x_label}</text>',
        f'<text x="{_fmt(margin / 4)}" y="{_fmt(height / 2)}" font-size="14" '
        f'text-anchor="middle" transform="rotate(-90 {_fmt(margin / 4)} {_fmt(height / 2)})">'
        f"{y_label}</text>",
        f'<text x="{_fmt(margin)}" y="{_fmt(height - margin + 18)}" font-size="12" '
        f'text-anchor="middle">{_fmt(x_lo)}</text>',
        f'<text x="{_fmt(width - margin)}" y="{_fmt(height - margin + 18)}" font-size="12" '
        f'text-anchor="middle">{_fmt(x_hi)}</text>',
        f'<text x="{_fmt(margin - 6)}" y="{_fmt(height - margin)}" font-size="12" '
        f'text-anchor="end">{_fmt(y_lo)}</text>',
        f'<text x="{_fmt(margin - 6)}" y="{_fmt(margin + 4)}" font-size="12" '
        f'text-anchor="end">{_fmt(y_hi)}</text>',
    ]
    for i, (name, vals, color) in enumerate(series):
        pts = " ".join(
            f"{_fmt(map_x(x))},{_fmt(map_y(v))}" for x, v in zip(xs, vals)
        )
        body.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
        body.append(
            f'<text x="{_fmt(width - margin)}" y="{_fmt(margin + 16 * i)}" font-size="12" '
            f'text-anchor="end" fill="{color}">{name}</text>'
        )
    return "\n".join(["<svg xmlns=\"http://www.w3.org/2000/svg\" "
                      f'width="{_fmt(width)}" height="{_fmt(height)}" '
                      f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">', *body, "</svg>"]) + "\n"
