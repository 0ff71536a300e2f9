"""Shared fixtures and independent test oracles.

The oracles here deliberately use brute force (path enumeration, dense
sampling, flood fill) so they share no logic with the code under test.
"""

from __future__ import annotations

import itertools
import math
import random

import numpy as np
import pytest

from cellnav.geometry import BaseStation, ChargingStation, NetworkMap
from cellnav.model import default_comm_params, default_uav_params


@pytest.fixture(scope="session")
def golden_uav():
    """Reference quadcopter, 2.97 kg total with a 1 kg payload."""
    return default_uav_params()


@pytest.fixture(scope="session")
def golden_comm():
    return default_comm_params()


def make_map(d0, stations, charging=(), u0=(0.0, 0.0), uF=(1.0, 0.0)):
    """Compact map builder: stations as (x, y[, lambda]), charging as (x, y[, tau])."""
    bs = tuple(
        BaseStation(s[0], s[1], s[2] if len(s) > 2 else 0.0) for s in stations
    )
    cs = tuple(
        ChargingStation(c[0], c[1], c[2] if len(c) > 2 else 0.0) for c in charging
    )
    return NetworkMap(d0=d0, stations=bs, charging=cs, u0=u0, uF=uF)


# -- graph oracles -------------------------------------------------------------


def enumerate_simple_paths(n, edges, directed, s, t):
    """Yield (weight, path) over every simple path, folding weights left."""
    adj = [[] for _ in range(n)]
    for u, v, w in edges:
        adj[u].append((v, w))
        if not directed:
            adj[v].append((u, w))

    def walk(u, seen, weight, path):
        if u == t:
            yield weight, list(path)
            return
        for v, w in adj[u]:
            if v not in seen:
                seen.add(v)
                path.append(v)
                yield from walk(v, seen, weight + w, path)
                path.pop()
                seen.remove(v)

    yield from walk(s, {s}, 0.0, [s])


def brute_shortest(n, edges, directed, s, t):
    """(weight, lexicographically-smallest path) by full enumeration, or None."""
    best = None
    for weight, path in enumerate_simple_paths(n, edges, directed, s, t):
        key = (weight, path)
        if best is None or key < best:
            best = key
    return best


def brute_minimax(n, edges, s, t):
    """Minimax edge weight over all simple undirected s-t paths, or inf."""
    adj = [[] for _ in range(n)]
    for u, v, w in edges:
        adj[u].append((v, w))
        adj[v].append((u, w))
    best = math.inf

    def walk(u, seen, worst):
        nonlocal best
        if u == t:
            best = min(best, worst)
            return
        for v, w in adj[u]:
            if v not in seen:
                seen.add(v)
                walk(v, seen, max(worst, w))
                seen.remove(v)

    walk(s, {s}, 0.0)
    return best


def floyd_warshall_reachable(n, edges, directed):
    reach = [[i == j for j in range(n)] for i in range(n)]
    for u, v, _ in edges:
        reach[u][v] = True
        if not directed:
            reach[v][u] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                row_k = reach[k]
                row_i = reach[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    return reach


def random_graph(rng, n_max=8, directed=False, zero_ok=False):
    """A random small graph with integer weights (exact float arithmetic)."""
    n = rng.randint(2, n_max)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < 0.45:
                w = rng.randint(0 if zero_ok else 1, 9)
                if directed and rng.random() < 0.5:
                    edges.append((v, u, float(w)))
                else:
                    edges.append((u, v, float(w)))
    return n, edges


# -- geometry oracles ----------------------------------------------------------


def sampled_outage(x1, x2, net, samples=10_000):
    """(outage flag, nearest boundary distance) by dense segment sampling."""
    xi = np.linspace(0.0, 1.0, samples)
    px = x1[0] + xi * (x2[0] - x1[0])
    py = x1[1] + xi * (x2[1] - x1[1])
    margin = np.full(samples, -np.inf)
    for x, y, r in net.effective_disks:
        margin = np.maximum(margin, r - np.hypot(px - x, py - y))
    return bool((margin < 0.0).any()), float(np.abs(margin).min())


def flood_fill_feasible(p, q, net, step=1.0):
    """Coverage-respecting reachability on a dense lattice (test maps only)."""
    xs = [x - r for x, y, r in net.effective_disks] + [p[0], q[0]]
    ys = [y - r for x, y, r in net.effective_disks] + [p[1], q[1]]
    x0, y0 = min(xs) - step, min(ys) - step
    x_hi = max([x + r for x, y, r in net.effective_disks] + [p[0], q[0]])
    y_hi = max([y + r for x, y, r in net.effective_disks] + [p[1], q[1]])
    nx = int((x_hi - x0) / step) + 3
    ny = int((y_hi - y0) / step) + 3
    xcoord = x0 + step * np.arange(nx)
    ycoord = y0 + step * np.arange(ny)
    covered = np.zeros((ny, nx), dtype=bool)
    for x, y, r in net.effective_disks:
        covered |= (ycoord[:, None] - y) ** 2 + (xcoord[None, :] - x) ** 2 <= r * r

    def nearest_cell(pt):
        c = int(round((pt[0] - x0) / step))
        r_ = int(round((pt[1] - y0) / step))
        return r_, c

    import collections

    sr, sc = nearest_cell(p)
    tr, tc = nearest_cell(q)
    if not (covered[sr, sc] and covered[tr, tc]):
        return False
    seen = np.zeros_like(covered)
    seen[sr, sc] = True
    queue = collections.deque([(sr, sc)])
    while queue:
        r_, c = queue.popleft()
        if (r_, c) == (tr, tc):
            return True
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                rr, cc = r_ + dr, c + dc
                if 0 <= rr < ny and 0 <= cc < nx and covered[rr, cc] and not seen[rr, cc]:
                    seen[rr, cc] = True
                    queue.append((rr, cc))
    return False


def enumerate_station_orders(n_stations, available=None):
    """All battery-swap visiting orders (subsets of stations, all orderings)."""
    stations = list(range(n_stations)) if available is None else list(available)
    for k in range(len(stations) + 1):
        yield from itertools.permutations(stations, k)


def rng_for(name: str) -> random.Random:
    """A deterministic RNG stream per test name."""
    import zlib

    return random.Random(zlib.crc32(name.encode()))
