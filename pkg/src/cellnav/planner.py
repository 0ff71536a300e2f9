"""Minimum-time routing under the coverage constraint, battery ignored.

The key fact used throughout: an optimal coverage-respecting route is a
polyline whose interior breakpoints all lie on intersection points of two
effective coverage boundaries. Those finitely many points (plus the two
terminals) form a graph whose covered straight segments are the edges, and a
deterministic Dijkstra pass yields the optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import NetworkMap, Point, chk_fea, chk_out, circle_intersections
from .graph import PlanGraph, dijkstra
from .model import UavParams, propulsion_power

# Two candidate vertices closer than this (m) are the same vertex.
VERTEX_MERGE_TOL = 1e-6


@dataclass(frozen=True)
class FlightLeg:
    """A straight constant-speed hop between two points."""

    start: Point
    end: Point
    speed: float

    @property
    def length(self) -> float:
        return math.hypot(self.end[0] - self.start[0], self.end[1] - self.start[1])

    @property
    def time(self) -> float:
        return self.length / self.speed

    def energy(self, uav: UavParams, total_weight: float | None = None) -> float:
        """Battery energy (J) the leg draws for the given airframe."""
        w = uav.total_weight if total_weight is None else total_weight
        power = propulsion_power(self.speed, w, uav.power)
        return self.time * power / uav.battery.transfer_ratio


@dataclass(frozen=True)
class SwapEvent:
    """A battery exchange: dwell seconds spent at charging station `station`."""

    station: int
    dwell: float


@dataclass(frozen=True)
class Trajectory:
    """Alternating flight legs and swap events, in travel order."""

    items: tuple[FlightLeg | SwapEvent, ...]

    @property
    def legs(self) -> tuple[FlightLeg, ...]:
        return tuple(i for i in self.items if isinstance(i, FlightLeg))

    @property
    def swaps(self) -> tuple[SwapEvent, ...]:
        return tuple(i for i in self.items if isinstance(i, SwapEvent))

    @property
    def total_distance(self) -> float:
        return math.fsum(leg.length for leg in self.legs)

    @property
    def total_time(self) -> float:
        return math.fsum(leg.time for leg in self.legs) + math.fsum(
            s.dwell for s in self.swaps
        )

    def total_energy(self, uav: UavParams) -> float:
        return math.fsum(leg.energy(uav) for leg in self.legs)


EMPTY_TRAJECTORY = Trajectory(items=())


@dataclass(frozen=True)
class LocalRoute:
    """Shortest covered route between one ordered pair of swap-graph nodes.

    src/dst index charging stations 0..N-1; N denotes the initial point and
    N+1 the final point. v_max is None when no allowed speed can cover the
    length on one battery.
    """

    src: int
    dst: int
    feasible_conn: bool
    length: float = math.inf
    points: tuple[Point, ...] = ()
    v_max: float | None = None


@dataclass(frozen=True)
class PlanResult:
    """Outcome of one planning call.

    objective is mission time (s) or propulsion energy (J) depending on
    `kind`; infinity when infeasible. local_routes carries the per-pair
    diagnostics for battery-aware plans.
    """

    feasible: bool
    objective: float
    trajectory: Trajectory
    kind: str = "time"
    local_routes: tuple[LocalRoute, ...] = ()


def infeasible_result(kind: str = "time") -> PlanResult:
    return PlanResult(feasible=False, objective=math.inf, trajectory=EMPTY_TRAJECTORY, kind=kind)


def dedupe_points(points: list[Point], tol: float = VERTEX_MERGE_TOL) -> list[Point]:
    """Drop points that duplicate an earlier one within tol (both coordinates)."""
    kept: list[Point] = []
    for p in points:
        duplicate = False
        for q in kept:
            if abs(p[0] - q[0]) <= tol and abs(p[1] - q[1]) <= tol:
                duplicate = True
                break
        if not duplicate:
            kept.append(p)
    return kept


def build_intersection_vertices(net: NetworkMap) -> list[Point]:
    """All boundary crossings of overlapping effective disks.

    Stations with zero effective radius carry no boundary and are skipped.
    The result is deduplicated to VERTEX_MERGE_TOL and sorted by (x, y).
    """
    disks = [(x, y, r) for x, y, r in net.effective_disks if r > 0.0]
    points: list[Point] = []
    for i in range(len(disks)):
        xi, yi, ri = disks[i]
        for j in range(i + 1, len(disks)):
            xj, yj, rj = disks[j]
            if math.hypot(xi - xj, yi - yj) <= ri + rj:
                points.extend(circle_intersections((xi, yi), ri, (xj, yj), rj))
    points.sort()
    return dedupe_points(points)


def _legs_along(points: list[Point] | tuple[Point, ...], speed: float) -> list[FlightLeg]:
    return [FlightLeg(a, b, speed) for a, b in zip(points, points[1:])]


def plan_unlimited(net: NetworkMap, v_q: float) -> PlanResult:
    """Fastest coverage-respecting route from u0 to uF at fixed speed v_q.

    Returns an infeasible result when no covered path connects the terminals.
    Every leg of a feasible result stays inside the coverage union.
    """
    if v_q <= 0:
        raise ValueError("v_q must be positive")
    if not chk_fea(net.u0, net.uF, net):
        return infeasible_result()
    if net.u0 == net.uF:
        return PlanResult(feasible=True, objective=0.0, trajectory=EMPTY_TRAJECTORY)

    # Terminals always occupy indices 0 and 1; intersection points that
    # duplicate a terminal (or each other) are dropped, never the terminals.
    vertices = [net.u0, net.uF]
    vertices.extend(
        p
        for p in dedupe_points([net.u0, net.uF] + build_intersection_vertices(net))
        if p not in (net.u0, net.uF)
    )
    edges: list[tuple[int, int, float]] = []
    for i in range(len(vertices)):
        for j in range(i + 1, len(vertices)):
            if not chk_out(vertices[i], vertices[j], net):
                d = math.hypot(
                    vertices[i][0] - vertices[j][0], vertices[i][1] - vertices[j][1]
                )
                edges.append((i, j, d / v_q))
    graph = PlanGraph(vertices=tuple(range(len(vertices))), edges=tuple(edges), directed=False)
    found = dijkstra(graph, 0, 1)
    if found is None:
        return infeasible_result()
    total_time, idx_path = found
    path_points = [vertices[i] for i in idx_path]
    legs = _legs_along(path_points, v_q)
    return PlanResult(
        feasible=True,
        objective=total_time,
        trajectory=Trajectory(items=tuple(legs)),
    )
