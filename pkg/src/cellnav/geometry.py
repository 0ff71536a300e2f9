"""Disk-union coverage geometry.

The network's coverage region is the union of one effective disk per base
station (radius = shared base radius minus a per-station offset). A route leg
is admissible only if the whole segment stays inside that union; this module
answers that question exactly by intersecting the segment with every disk and
merging the resulting parameter intervals, instead of stepping along the
segment with a small epsilon.

Everything here is pure and safe for concurrent use.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

Point = tuple[float, float]

# Two merged coverage intervals closer than this (in segment parameter xi)
# are treated as touching; a residual gap this small is not an outage.
MERGE_TOL = 1e-12

# Relative tolerance on the circle-intersection discriminant below which two
# circles are treated as tangent (one intersection point).
TANGENT_REL_TOL = 1e-9


class MapValidationError(ValueError):
    """A network map violates a structural invariant."""


class CoverageInterval(NamedTuple):
    """A maximal covered stretch [lo, hi] of a segment, in parameter xi."""

    lo: float
    hi: float


@dataclass(frozen=True)
class BaseStation:
    """A base station at (x, y) with coverage offset lambda (m) in [0, d0]."""

    x: float
    y: float
    offset: float = 0.0

    @property
    def position(self) -> Point:
        return (self.x, self.y)


@dataclass(frozen=True)
class ChargingStation:
    """A battery-swap site at (x, y).

    delay: total dwell (s) for one swap, including waiting, the exchange
           itself, and any landing/takeoff penalty; math.inf marks the
           station unavailable.
    surcharge: energy (J) deducted from the fresh battery's flight budget to
               account for the descent/climb, 0 when stations sit at the
               flight altitude.
    """

    x: float
    y: float
    delay: float = 0.0
    surcharge: float = 0.0

    @property
    def position(self) -> Point:
        return (self.x, self.y)

    @property
    def available(self) -> bool:
        return math.isfinite(self.delay)


@dataclass(frozen=True)
class NetworkMap:
    """Immutable description of one planning scenario.

    d0 is the shared base coverage radius; each station's effective radius is
    d0 - station.offset (never negative). Charging-station positions must be
    pairwise distinct.
    """

    d0: float
    stations: tuple[BaseStation, ...]
    charging: tuple[ChargingStation, ...] = ()
    u0: Point = (0.0, 0.0)
    uF: Point = (0.0, 0.0)
    altitude: float = 100.0
    cs_altitude: float = 100.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "stations", tuple(self.stations))
        object.__setattr__(self, "charging", tuple(self.charging))
        object.__setattr__(self, "u0", (float(self.u0[0]), float(self.u0[1])))
        object.__setattr__(self, "uF", (float(self.uF[0]), float(self.uF[1])))
        if not self.d0 > 0:
            raise MapValidationError(f"d0 must be positive, got {self.d0!r}")
        if not self.stations:
            raise MapValidationError("at least one base station is required")
        for i, s in enumerate(self.stations):
            if not 0.0 <= s.offset <= self.d0:
                raise MapValidationError(
                    f"stations[{i}].lambda must lie in [0, d0], got {s.offset!r}"
                )
        for i, c in enumerate(self.charging):
            if not (c.delay >= 0):
                raise MapValidationError(
                    f"charging[{i}].tau must be nonnegative, got {c.delay!r}"
                )
            if c.surcharge < 0:
                raise MapValidationError(
                    f"charging[{i}].surcharge must be nonnegative, got {c.surcharge!r}"
                )
        positions = [c.position for c in self.charging]
        if len(set(positions)) != len(positions):
            raise MapValidationError("charging station positions must be pairwise distinct")

    def effective_radius(self, index: int) -> float:
        return self.d0 - self.stations[index].offset

    @property
    def effective_disks(self) -> tuple[tuple[float, float, float], ...]:
        """(x, y, radius) per station; radius may be zero."""
        return tuple((s.x, s.y, self.d0 - s.offset) for s in self.stations)


def circle_intersections(
    center1: Point,
    r1: float,
    center2: Point,
    r2: float,
    tol: float | None = None,
) -> list[Point]:
    """Intersection points of two circle boundaries.

    Returns two points for properly crossing circles, one for (near-)tangent
    circles, and none for disjoint, nested, or concentric pairs. ``tol`` is an
    absolute tolerance (m) on the half-chord below which the circles count as
    tangent; by default it scales with the geometry (relative 1e-9).
    """
    if r1 < 0 or r2 < 0:
        raise ValueError("radii must be nonnegative")
    (x1, y1), (x2, y2) = center1, center2
    dx, dy = x2 - x1, y2 - y1
    d = math.hypot(dx, dy)
    if d == 0.0:
        return []  # concentric: no boundary crossing even when identical
    if tol is None:
        tol = TANGENT_REL_TOL * max(r1, r2, d)
    # Distance from center1 to the chord line, along the center axis.
    a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h_sq = r1 * r1 - a * a
    h = math.sqrt(h_sq) if h_sq > 0 else 0.0
    ux, uy = dx / d, dy / d
    mx, my = x1 + a * ux, y1 + a * uy
    if h <= tol:
        if h_sq < 0 and math.sqrt(-h_sq) > tol:
            return []  # clearly disjoint or nested
        return [(mx, my)]
    p1 = (mx - h * uy, my + h * ux)
    p2 = (mx + h * uy, my - h * ux)
    return sorted([p1, p2])


def point_coverage_margin(p: Point, net: NetworkMap) -> float:
    """Largest (effective radius - distance) over stations; >= 0 means covered."""
    best = -math.inf
    px, py = p
    for x, y, r in net.effective_disks:
        margin = r - math.hypot(px - x, py - y)
        if margin > best:
            best = margin
    return best


def point_covered(p: Point, net: NetworkMap) -> bool:
    return point_coverage_margin(p, net) >= 0.0


def segment_coverage_intervals(x1: Point, x2: Point, net: NetworkMap) -> list[CoverageInterval]:
    """Merged, disjoint, ascending covered intervals of the segment x1 -> x2.

    The segment is parameterized as alpha(xi) = x1 + xi * (x2 - x1) for
    xi in [0, 1]; each station contributes the xi-range where alpha lies in
    its effective disk (a quadratic in xi), clipped to [0, 1]. Intervals whose
    gap is below MERGE_TOL merge.
    """
    ax, ay = x1
    bx, by = x2
    dx, dy = bx - ax, by - ay
    seg_sq = dx * dx + dy * dy
    if seg_sq == 0.0:
        raise ValueError("segment endpoints must be distinct")
    raw: list[tuple[float, float]] = []
    for cx, cy, r in net.effective_disks:
        fx, fy = ax - cx, ay - cy
        # |f + xi*d|^2 <= r^2  ->  seg_sq*xi^2 + 2*(f.d)*xi + (|f|^2 - r^2) <= 0
        b = fx * dx + fy * dy
        c = fx * fx + fy * fy - r * r
        disc = b * b - seg_sq * c
        if disc < 0.0:
            continue
        root = math.sqrt(disc)
        lo = (-b - root) / seg_sq
        hi = (-b + root) / seg_sq
        lo = 0.0 if lo < 0.0 else lo
        hi = 1.0 if hi > 1.0 else hi
        if lo <= hi and hi >= 0.0 and lo <= 1.0:
            raw.append((lo, hi))
    raw.sort()
    merged: list[CoverageInterval] = []
    for lo, hi in raw:
        if merged and lo <= merged[-1].hi + MERGE_TOL:
            if hi > merged[-1].hi:
                merged[-1] = CoverageInterval(merged[-1].lo, hi)
        else:
            merged.append(CoverageInterval(lo, hi))
    return merged


def chk_out(x1: Point, x2: Point, net: NetworkMap) -> bool:
    """True when some point of the segment x1 -> x2 falls outside coverage."""
    intervals = segment_coverage_intervals(x1, x2, net)
    if not intervals:
        return True
    first = intervals[0]
    return not (first.lo <= MERGE_TOL and first.hi >= 1.0 - MERGE_TOL)


def segment_covered(x1: Point, x2: Point, net: NetworkMap) -> bool:
    """Convenience inverse of chk_out; degenerate segments reduce to a point test."""
    if x1 == x2:
        return point_covered(x1, net)
    return not chk_out(x1, x2, net)


def _covering_stations(p: Point, net: NetworkMap) -> list[int]:
    px, py = p
    out = []
    for i, (x, y, r) in enumerate(net.effective_disks):
        if math.hypot(px - x, py - y) <= r:
            out.append(i)
    return out


def station_adjacency(net: NetworkMap) -> list[list[int]]:
    """Neighbor lists over stations; i ~ j when their effective disks touch."""
    disks = net.effective_disks
    m = len(disks)
    neighbors: list[list[int]] = [[] for _ in range(m)]
    for i in range(m):
        xi, yi, ri = disks[i]
        for j in range(i + 1, m):
            xj, yj, rj = disks[j]
            if math.hypot(xi - xj, yi - yj) <= ri + rj:
                neighbors[i].append(j)
                neighbors[j].append(i)
    return neighbors


def chk_fea(p: Point, q: Point, net: NetworkMap) -> bool:
    """True when a coverage-respecting path from p to q exists.

    p and q must each lie in some effective disk, and their covering stations
    must belong to one connected component of the disk-overlap graph. The
    union of disks of a connected component is path-connected, so this test
    is exact.
    """
    src = _covering_stations(p, net)
    dst = _covering_stations(q, net)
    if not src or not dst:
        return False
    dst_set = set(dst)
    if dst_set.intersection(src):
        return True
    neighbors = station_adjacency(net)
    seen = [False] * len(net.stations)
    queue = deque(src)
    for i in src:
        seen[i] = True
    while queue:
        i = queue.popleft()
        if i in dst_set:
            return True
        for j in neighbors[i]:
            if not seen[j]:
                seen[j] = True
                queue.append(j)
    return False
