"""Battery-aware two-level route planning with swaps at charging stations.

Level one finds, for every ordered pair of swap-graph nodes (charging
stations plus the two terminals), the shortest covered route and the fastest
allowed speed whose single-battery range covers it. Level two runs a
deterministic shortest-path search over a directed station graph whose edge
weights combine flight time (or propulsion energy) with the swap dwell at the
arrival station.

Node indexing: charging stations are 0..N-1, the initial point is N, the
final point is N+1.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .geometry import (
    NetworkMap,
    Point,
    chk_fea,
    chk_out,
    point_covered,
)
from .graph import PlanGraph, dijkstra
from .model import UavParams, energy_per_distance, max_flight_distance, propulsion_power
from .planner import (
    EMPTY_TRAJECTORY,
    FlightLeg,
    LocalRoute,
    PlanResult,
    SwapEvent,
    Trajectory,
    VERTEX_MERGE_TOL,
    build_intersection_vertices,
    infeasible_result,
)

__all__ = [
    "EdgeSets",
    "LocalRoute",
    "PlanResult",
    "chk_sp",
    "precompute_edge_sets",
    "local_route",
    "plan_min_time",
    "plan_min_energy",
    "fixed_speed_energy_bound",
]


def chk_sp(length: float, uav: UavParams, reserve: float = 0.0) -> tuple[bool, float]:
    """Fastest allowed speed able to cover `length` on one battery.

    Returns (True, v_max) when some positive speed's battery-limited range is
    at least `length`, else (False, 0.0). `reserve` (J) shrinks the flight
    budget, e.g. for the descent/climb of the swap that started the stretch.
    Zero length is coverable at the top speed.
    """
    if length < 0:
        raise ValueError("length must be nonnegative")
    budget = uav.battery.usable_energy(uav.battery_weight)
    if reserve >= budget:
        return (False, 0.0)
    scale = (budget - reserve) / budget
    w = uav.total_weight
    for v in reversed(uav.speeds):
        if v == 0:
            break
        if scale * max_flight_distance(v, w, uav.battery_weight, uav) >= length:
            return (True, v)
    return (False, 0.0)


@dataclass(frozen=True)
class EdgeSets:
    """Covered segments among all candidate vertices, partitioned by endpoint.

    points: vertex positions; indices 0..N+1 are the swap-graph nodes, the
    rest are coverage-boundary intersection points.
    station_edges[n]: covered segments with node n as an endpoint.
    interior_edges: covered segments between two intersection points.
    Edges are (i, j, length) with i < j.
    """

    points: tuple[Point, ...]
    n_stations: int
    station_edges: tuple[tuple[tuple[int, int, float], ...], ...]
    interior_edges: tuple[tuple[int, int, float], ...]

    @property
    def n_nodes(self) -> int:
        return self.n_stations + 2

    @property
    def u0_index(self) -> int:
        return self.n_stations

    @property
    def uf_index(self) -> int:
        return self.n_stations + 1


def precompute_edge_sets(net: NetworkMap) -> EdgeSets:
    """Outage-test every candidate segment once, bucketed by endpoint node.

    A segment incident to node n lands in station_edges[n] (in both buckets
    for a node-node segment); segments between two intersection points land
    in interior_edges. Segments with an outage appear nowhere.
    """
    n = len(net.charging)
    node_points = [c.position for c in net.charging] + [net.u0, net.uF]
    intersections = [
        p
        for p in build_intersection_vertices(net)
        if all(
            abs(p[0] - q[0]) > VERTEX_MERGE_TOL or abs(p[1] - q[1]) > VERTEX_MERGE_TOL
            for q in node_points
        )
    ]
    points = node_points + intersections
    n_nodes = n + 2
    station_edges: list[list[tuple[int, int, float]]] = [[] for _ in range(n_nodes)]
    interior_edges: list[tuple[int, int, float]] = []
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if points[i] == points[j]:
                continue
            if chk_out(points[i], points[j], net):
                continue
            length = math.hypot(
                points[i][0] - points[j][0], points[i][1] - points[j][1]
            )
            edge = (i, j, length)
            if i < n_nodes or j < n_nodes:
                if i < n_nodes:
                    station_edges[i].append(edge)
                if j < n_nodes:
                    station_edges[j].append(edge)
            else:
                interior_edges.append(edge)
    return EdgeSets(
        points=tuple(points),
        n_stations=n,
        station_edges=tuple(tuple(e) for e in station_edges),
        interior_edges=tuple(interior_edges),
    )


def _shortest_local_path(
    net: NetworkMap, src: int, dst: int, sets: EdgeSets
) -> tuple[float, tuple[Point, ...]] | None:
    """Shortest covered polyline between two nodes over the local graph."""
    p_src, p_dst = sets.points[src], sets.points[dst]
    if p_src == p_dst:
        return (0.0, (p_src,))
    n_nodes = sets.n_nodes
    vertex_ids = [src, dst] + list(range(n_nodes, len(sets.points)))
    id_set = set(vertex_ids)
    edges: list[tuple[int, int, float]] = []
    seen: set[tuple[int, int]] = set()
    for bucket in (sets.interior_edges, sets.station_edges[src], sets.station_edges[dst]):
        for i, j, length in bucket:
            if i in id_set and j in id_set and (i, j) not in seen:
                seen.add((i, j))
                edges.append((i, j, length))
    local_index = {vid: k for k, vid in enumerate(vertex_ids)}
    graph = PlanGraph(
        vertices=tuple(range(len(vertex_ids))),
        edges=tuple((local_index[i], local_index[j], w) for i, j, w in edges),
        directed=False,
    )
    found = dijkstra(graph, local_index[src], local_index[dst])
    if found is None:
        return None
    length, idx_path = found
    return (length, tuple(sets.points[vertex_ids[k]] for k in idx_path))


def local_route(
    net: NetworkMap, src: int, dst: int, sets: EdgeSets, uav: UavParams
) -> LocalRoute:
    """Best single-battery route from node src to node dst.

    Connectivity feasibility comes from the exact disk-union test; when it
    holds, the shortest covered polyline is searched and the fastest speed
    able to cover its length on one battery is attached (None when no speed
    can). The battery reserve of the origin station's swap applies.
    """
    p_src, p_dst = sets.points[src], sets.points[dst]
    if p_src == p_dst:
        if not point_covered(p_src, net):
            return LocalRoute(src=src, dst=dst, feasible_conn=False)
        ok, v_max = chk_sp(0.0, uav, reserve=_node_reserve(net, src))
        return LocalRoute(
            src=src, dst=dst, feasible_conn=True, length=0.0,
            points=(p_src,), v_max=v_max if ok else None,
        )
    if not chk_fea(p_src, p_dst, net):
        return LocalRoute(src=src, dst=dst, feasible_conn=False)
    found = _shortest_local_path(net, src, dst, sets)
    if found is None:
        return LocalRoute(src=src, dst=dst, feasible_conn=False)
    length, points = found
    ok, v_max = chk_sp(length, uav, reserve=_node_reserve(net, src))
    return LocalRoute(
        src=src, dst=dst, feasible_conn=True, length=length,
        points=points, v_max=v_max if ok else None,
    )


def _node_reserve(net: NetworkMap, node: int) -> float:
    """Energy reserve charged against a stretch beginning at this node."""
    if node < len(net.charging):
        return net.charging[node].surcharge
    return 0.0


def _node_delay(net: NetworkMap, node: int) -> float:
    if node < len(net.charging):
        return net.charging[node].delay
    return 0.0


def _global_search(
    n_nodes: int,
    edges: list[tuple[int, int, float]],
    src: int,
    dst: int,
) -> tuple[float, list[int]] | None:
    """Directed Dijkstra over the tiny station graph.

    Equal-cost ties prefer fewer hops (fewer swaps), then the
    lexicographically smallest station sequence. The graph never exceeds a
    handful of vertices, so full path tuples ride along in the heap.
    """
    adj: list[list[tuple[int, float]]] = [[] for _ in range(n_nodes)]
    for u, v, w in edges:
        adj[u].append((v, w))
    for bucket in adj:
        bucket.sort()
    settled = [False] * n_nodes
    heap: list[tuple[float, int, tuple[int, ...]]] = [(0.0, 1, (src,))]
    while heap:
        d, hops, path = heapq.heappop(heap)
        u = path[-1]
        if settled[u]:
            continue
        settled[u] = True
        if u == dst:
            return d, list(path)
        for v, w in adj[u]:
            if not settled[v]:
                heapq.heappush(heap, (d + w, hops + 1, path + (v,)))
    return None


def _route_table(
    net: NetworkMap, uav: UavParams, sets: EdgeSets
) -> dict[tuple[int, int], LocalRoute]:
    """Local routes for every ordered origin/destination node pair.

    Origins are available stations plus the initial point; destinations are
    available stations plus the final point. The geometric search runs once
    per unordered pair; the reverse direction reuses the reversed polyline
    with its own origin battery reserve.
    """
    n = len(net.charging)
    stations = [i for i in range(n) if net.charging[i].available]
    origins = stations + [sets.u0_index]
    destinations = stations + [sets.uf_index]
    routes: dict[tuple[int, int], LocalRoute] = {}
    for src in origins:
        for dst in destinations:
            if src == dst or (src, dst) in routes:
                continue
            route = local_route(net, src, dst, sets, uav)
            routes[(src, dst)] = route
            if dst in origins and src in destinations:
                if route.feasible_conn:
                    ok, v_max = chk_sp(route.length, uav, reserve=_node_reserve(net, dst))
                    back = LocalRoute(
                        src=dst, dst=src, feasible_conn=True, length=route.length,
                        points=tuple(reversed(route.points)),
                        v_max=v_max if ok else None,
                    )
                else:
                    back = LocalRoute(src=dst, dst=src, feasible_conn=False)
                routes[(dst, src)] = back
    return routes


def _edge_speed_energy(route: LocalRoute, uav: UavParams) -> tuple[float, float] | None:
    """(speed, total propulsion energy) minimizing energy over the route.

    Only speeds whose battery range covers the route qualify; among ties in
    energy the faster speed wins. None when the route defeats every speed.
    """
    if route.v_max is None:
        return None
    if route.length == 0.0:
        return (uav.top_speed, 0.0)
    w = uav.total_weight
    best: tuple[float, float] | None = None
    for v in uav.speeds:
        if v == 0 or v > route.v_max:
            # v_max is the maximum feasible speed, so nothing above it can
            # cover the length.
            continue
        if max_flight_distance(v, w, uav.battery_weight, uav) < route.length:
            continue
        e = route.length * energy_per_distance(v, w, uav)
        if best is None or e < best[1] or (e == best[1] and v > best[0]):
            best = (v, e)
    return best


def _plan_battery(net: NetworkMap, uav: UavParams, kind: str) -> PlanResult:
    sets = precompute_edge_sets(net)
    routes = _route_table(net, uav, sets)
    all_routes = tuple(routes[key] for key in sorted(routes))
    u0, uf = sets.u0_index, sets.uf_index

    edges: list[tuple[int, int, float]] = []
    edge_speed: dict[tuple[int, int], float] = {}
    for (src, dst), route in sorted(routes.items()):
        if not route.feasible_conn or route.v_max is None:
            continue
        if kind == "time":
            weight = route.length / route.v_max + _node_delay(net, dst)
            edges.append((src, dst, weight))
            edge_speed[(src, dst)] = route.v_max
        else:
            picked = _edge_speed_energy(route, uav)
            if picked is None:
                continue
            v_e, energy = picked
            edges.append((src, dst, energy))
            edge_speed[(src, dst)] = v_e

    found = _global_search(sets.n_nodes, edges, u0, uf)
    if found is None:
        return PlanResult(
            feasible=False, objective=math.inf, trajectory=EMPTY_TRAJECTORY,
            kind=kind, local_routes=all_routes,
        )
    objective, node_path = found
    items: list[FlightLeg | SwapEvent] = []
    for a, b in zip(node_path, node_path[1:]):
        route = routes[(a, b)]
        v = edge_speed[(a, b)]
        items.extend(
            FlightLeg(p, q, v) for p, q in zip(route.points, route.points[1:])
        )
        if b < sets.n_stations:
            items.append(SwapEvent(station=b, dwell=net.charging[b].delay))
    return PlanResult(
        feasible=True,
        objective=objective,
        trajectory=Trajectory(items=tuple(items)),
        kind=kind,
        local_routes=all_routes,
    )


def plan_min_time(net: NetworkMap, uav: UavParams) -> PlanResult:
    """Minimum mission time (flight plus swap dwells) from u0 to uF.

    Each inter-swap stretch is flown at the fastest speed whose single-battery
    range covers it; the station order comes from a deterministic Dijkstra
    pass whose edge weights are flight time plus the arrival station's dwell.
    """
    return _plan_battery(net, uav, "time")


def plan_min_energy(net: NetworkMap, uav: UavParams) -> PlanResult:
    """Minimum total propulsion energy from u0 to uF.

    Same pipeline as plan_min_time, but each edge is priced and flown at the
    feasible speed with the least energy per meter; swap dwells do not enter
    the objective.
    """
    return _plan_battery(net, uav, "energy")


def fixed_speed_energy_bound(
    length: float,
    splits: list[tuple[float, float]] | tuple[tuple[float, float], ...],
    uav: UavParams,
) -> tuple[float, float]:
    """Energy of a mixed-speed plan vs. its equal-time fixed-speed variant.

    splits is a sequence of (sub_length, speed); the sub-lengths must sum to
    `length`. The fixed-speed variant travels the same distance in the same
    total time at the single speed length/total_time. With a convex power
    curve the fixed-speed energy never exceeds the mixed one.
    """
    if not splits:
        raise ValueError("at least one split is required")
    total = math.fsum(l for l, _ in splits)
    if not math.isclose(total, length, rel_tol=1e-9, abs_tol=1e-9):
        raise ValueError(f"splits sum to {total!r}, expected {length!r}")
    w = uav.total_weight
    eta = uav.battery.transfer_ratio
    times = [l / v for l, v in splits]
    mixed = math.fsum(
        t * propulsion_power(v, w, uav.power) / eta for t, (_, v) in zip(times, splits)
    )
    total_time = math.fsum(times)
    v_bar = length / total_time
    fixed = total_time * propulsion_power(v_bar, w, uav.power) / eta
    return mixed, fixed
