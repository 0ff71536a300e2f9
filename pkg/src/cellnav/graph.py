"""Deterministic weighted-graph kernel: Dijkstra and BFS reachability.

Graphs are immutable after construction; queries may run concurrently.
Shortest-path ties are broken by the lexicographically smallest sequence of
vertex indices, so two builds of the same graph (in any edge order) return
byte-identical paths.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Sequence


@dataclass(frozen=True)
class PlanGraph:
    """A weighted graph over an ordered sequence of unique, opaque keys.

    Edges are (from_index, to_index, weight) with finite nonnegative weights.
    Undirected graphs store each edge once and traverse it both ways.
    """

    vertices: tuple[Hashable, ...]
    edges: tuple[tuple[int, int, float], ...]
    directed: bool = False
    _index: dict = field(init=False, repr=False, compare=False)
    _adj_out: tuple = field(init=False, repr=False, compare=False)
    _adj_in: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        vertices = tuple(self.vertices)
        object.__setattr__(self, "vertices", vertices)
        index = {key: i for i, key in enumerate(vertices)}
        if len(index) != len(vertices):
            raise ValueError("vertex keys must be unique")
        n = len(vertices)
        adj_out: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        adj_in: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        edges = tuple((int(u), int(v), float(w)) for u, v, w in self.edges)
        object.__setattr__(self, "edges", edges)
        for u, v, w in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) references a missing vertex")
            if not (math.isfinite(w) and w >= 0.0):
                raise ValueError(f"edge ({u}, {v}) weight must be finite and >= 0, got {w!r}")
            adj_out[u].append((v, w))
            adj_in[v].append((u, w))
            if not self.directed:
                adj_out[v].append((u, w))
                adj_in[u].append((v, w))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_adj_out", tuple(tuple(a) for a in adj_out))
        object.__setattr__(self, "_adj_in", tuple(tuple(a) for a in adj_in))

    def index_of(self, key: Hashable) -> int:
        try:
            return self._index[key]
        except KeyError:
            raise KeyError(f"vertex {key!r} is not in the graph") from None


def _distances(adj: Sequence[Sequence[tuple[int, float]]], source: int) -> list[float]:
    """Plain Dijkstra distance pass with index-ordered tie handling."""
    n = len(adj)
    dist = [math.inf] * n
    dist[source] = 0.0
    done = [False] * n
    heap: list[tuple[float, int]] = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in adj[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def dijkstra(
    g: PlanGraph, s: Hashable, t: Hashable
) -> tuple[float, list[Hashable]] | None:
    """Minimum-weight path from s to t, or None when t is unreachable.

    Returns (total_weight, vertex keys along the path). Among equal-weight
    paths the lexicographically smallest index sequence wins: distances to t
    are computed first, then the path is grown greedily from s, always taking
    the lowest-index neighbor that preserves the remaining distance.
    """
    si, ti = g.index_of(s), g.index_of(t)
    dist_to_t = _distances(g._adj_in, ti)
    if math.isinf(dist_to_t[si]):
        return None
    path_idx = [si]
    visited = {si}
    u = si
    while u != ti:
        best = -1
        for v, w in g._adj_out[u]:
            if v in visited:
                continue
            if w + dist_to_t[v] == dist_to_t[u] and (best < 0 or v < best):
                best = v
        if best < 0:
            # Zero-weight cycle among tied vertices; fall back to the lowest
            # vertex that still strictly shortens the remaining distance.
            for v, w in g._adj_out[u]:
                if w + dist_to_t[v] == dist_to_t[u] and dist_to_t[v] < dist_to_t[u]:
                    if best < 0 or v < best:
                        best = v
        if best < 0:
            raise RuntimeError("shortest-path reconstruction failed")
        path_idx.append(best)
        visited.add(best)
        u = best
    total = 0.0
    for a, b in zip(path_idx, path_idx[1:]):
        w = min(w for v, w in g._adj_out[a] if v == b)
        total += w
    return total, [g.vertices[i] for i in path_idx]


def bfs_reachable(g: PlanGraph, s: Hashable, t: Hashable) -> bool:
    """True when a (directed) path from s to t exists."""
    si, ti = g.index_of(s), g.index_of(t)
    if si == ti:
        return True
    seen = [False] * len(g.vertices)
    seen[si] = True
    queue = deque([si])
    while queue:
        u = queue.popleft()
        for v, _ in g._adj_out[u]:
            if v == ti:
                return True
            if not seen[v]:
                seen[v] = True
                queue.append(v)
    return False
