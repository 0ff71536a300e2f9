"""Deterministic SVG rendering of a map and an optional trajectory.

Hand-rolled SVG 1.1 text output: fixed attribute order and fixed-precision
coordinates, so identical inputs yield byte-identical files.
"""

from __future__ import annotations

from .geometry import NetworkMap
from .planner import Trajectory

_STATION_FILL = "#4a90d9"
_TRAJECTORY_STROKE = "#d0342c"


def _f(x: float) -> str:
    return format(x, ".2f")


def emit_svg(net: NetworkMap, traj: Trajectory | None = None, width: float = 800.0) -> str:
    """Render coverage disks, stations, charging sites, and the route."""
    xs: list[float] = []
    ys: list[float] = []
    for x, y, r in net.effective_disks:
        xs.extend((x - r, x + r))
        ys.extend((y - r, y + r))
    for p in (net.u0, net.uF, *(c.position for c in net.charging)):
        xs.append(p[0])
        ys.append(p[1])
    pad = 0.03 * max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    x_lo, x_hi = min(xs) - pad, max(xs) + pad
    y_lo, y_hi = min(ys) - pad, max(ys) + pad
    scale = width / (x_hi - x_lo)
    height = (y_hi - y_lo) * scale

    def sx(x: float) -> str:
        return _f((x - x_lo) * scale)

    def sy(y: float) -> str:
        return _f((y_hi - y) * scale)

    def sr(r: float) -> str:
        return _f(r * scale)

    out: list[str] = []
    out.append(
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">'
    )
    out.append(f'<rect width="{_f(width)}" height="{_f(height)}" fill="#ffffff"/>')
    for x, y, r in net.effective_disks:
        if r > 0:
            out.append(
                f'<circle cx="{sx(x)}" cy="{sy(y)}" r="{sr(r)}" '
                f'fill="{_STATION_FILL}" fill-opacity="0.18" '
                f'stroke="{_STATION_FILL}" stroke-width="1"/>'
            )
        out.append(
            f'<circle cx="{sx(x)}" cy="{sy(y)}" r="3" fill="{_STATION_FILL}"/>'
        )
    for i, c in enumerate(net.charging):
        color = "#2e8b57" if c.available else "#9e9e9e"
        out.append(
            f'<rect x="{_f(float(sx(c.x)) - 5)}" y="{_f(float(sy(c.y)) - 5)}" '
            f'width="10" height="10" fill="{color}"/>'
        )
        out.append(
            f'<text x="{_f(float(sx(c.x)) + 7)}" y="{_f(float(sy(c.y)) - 7)}" '
            f'font-size="12" fill="{color}">C{i}</text>'
        )
    if traj is not None and traj.legs:
        points: list[str] = [f"{sx(traj.legs[0].start[0])},{sy(traj.legs[0].start[1])}"]
        points.extend(f"{sx(leg.end[0])},{sy(leg.end[1])}" for leg in traj.legs)
        out.append(
            f'<polyline points="{" ".join(points)}" fill="none" '
            f'stroke="{_TRAJECTORY_STROKE}" stroke-width="2"/>'
        )
        for swap in traj.swaps:
            if 0 <= swap.station < len(net.charging):
                c = net.charging[swap.station]
                out.append(
                    f'<circle cx="{sx(c.x)}" cy="{sy(c.y)}" r="7" fill="none" '
                    f'stroke="#e8a33d" stroke-width="3"/>'
                )
    for label, p in (("u0", net.u0), ("uF", net.uF)):
        out.append(f'<circle cx="{sx(p[0])}" cy="{sy(p[1])}" r="4" fill="#222222"/>')
        out.append(
            f'<text x="{_f(float(sx(p[0])) + 7)}" y="{_f(float(sy(p[1])) + 4)}" '
            f'font-size="12" fill="#222222">{label}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
