"""Maximum deliverable payload via the bottleneck (minimax) station edge.

A payload is deliverable exactly when the drone can cross the longest edge of
the best station-to-station route on one battery: the bottleneck edge, i.e.
the minimax edge length over all station-graph paths between the terminals.
Heavier payloads raise propulsion power and shrink range, so the search walks
the payload grid until the bottleneck stops being coverable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .geometry import NetworkMap
from .model import UavParams
from .planner import LocalRoute
from .planner_battery import chk_sp, precompute_edge_sets, _route_table


@dataclass(frozen=True)
class PayloadQuery:
    """Payload search over the grid {0, eps_w, ..., k_max * eps_w} (kg)."""

    eps_w: float
    k_max: int
    net: NetworkMap
    uav: UavParams

    def __post_init__(self) -> None:
        if not self.eps_w > 0:
            raise ValueError("eps_w must be positive")
        if self.k_max < 1:
            raise ValueError("k_max must be at least 1")


@dataclass(frozen=True)
class BottleneckResult:
    """The last edge whose removal disconnects the terminals."""

    connected: bool
    length: float  # inf when disconnected
    edge: tuple[int, int] | None  # node indices, None when disconnected


@dataclass(frozen=True)
class PayloadResult:
    deliverable: bool
    w3: float  # largest deliverable payload (kg); 0 with deliverable=False means none
    bottleneck: BottleneckResult


def _connected(n_nodes: int, edges: list[tuple[int, int, float]], s: int, t: int) -> bool:
    adj: list[list[int]] = [[] for _ in range(n_nodes)]
    for i, j, _ in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = [False] * n_nodes
    seen[s] = True
    stack = [s]
    while stack:
        u = stack.pop()
        if u == t:
            return True
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                stack.append(v)
    return False


def bottleneck_edge(
    routes: Sequence[LocalRoute], n_stations: int
) -> BottleneckResult:
    """Minimax edge of the undirected station graph built from local routes.

    Only connectivity feasibility matters here (battery limits are the next
    step's concern). Starting from all connectivity-feasible edges weighted by
    route length, the longest edge is deleted repeatedly until the terminals
    disconnect; the last deletion is the bottleneck. Length ties delete the
    edge with the larger (i, j) node pair first, which leaves the minimax
    value unchanged and keeps the reported edge deterministic.
    """
    n_nodes = n_stations + 2
    u0, uf = n_stations, n_stations + 1
    edges: dict[tuple[int, int], float] = {}
    for r in routes:
        if not r.feasible_conn:
            continue
        key = (min(r.src, r.dst), max(r.src, r.dst))
        if key not in edges or r.length < edges[key]:
            edges[key] = r.length
    edge_list = [(i, j, length) for (i, j), length in sorted(edges.items())]
    if not _connected(n_nodes, edge_list, u0, uf):
        return BottleneckResult(connected=False, length=math.inf, edge=None)
    remaining = list(edge_list)
    while True:
        longest = max(remaining, key=lambda e: (e[2], e[0], e[1]))
        remaining.remove(longest)
        if not _connected(n_nodes, remaining, u0, uf):
            return BottleneckResult(
                connected=True, length=longest[2], edge=(longest[0], longest[1])
            )


def max_payload(q: PayloadQuery) -> PayloadResult:
    """Largest payload on the weight grid deliverable across the bottleneck.

    The drone's induced-power terms are re-evaluated at every candidate total
    weight. Returns deliverable=False when the terminals are disconnected or
    when even the empty drone cannot cross the bottleneck on one battery.
    """
    sets = precompute_edge_sets(q.net)
    routes = _route_table(q.net, q.uav, sets)
    all_routes = [routes[key] for key in sorted(routes)]
    bott = bottleneck_edge(all_routes, len(q.net.charging))
    if not bott.connected:
        return PayloadResult(deliverable=False, w3=0.0, bottleneck=bott)
    ok0, _ = chk_sp(bott.length, q.uav.with_payload(0.0))
    if not ok0:
        return PayloadResult(deliverable=False, w3=0.0, bottleneck=bott)
    w3 = 0.0
    for k in range(1, q.k_max + 1):
        candidate = k * q.eps_w
        ok, _ = chk_sp(bott.length, q.uav.with_payload(candidate))
        if not ok:
            break
        w3 = candidate
    return PayloadResult(deliverable=True, w3=w3, bottleneck=bott)
