"""Grid-quantized upper-bound planner used to cross-check the exact planners.

A square lattice is laid over the coverage region (anchored at the map's
bounding box, so halving the step keeps every prior lattice point). Lattice
points inside the coverage union become nodes; short hops between them (all
coprime offsets up to a few cells) become edges after an exact whole-segment
coverage test. Off-lattice points of interest (terminals and charging
stations) attach to nearby covered lattice points through verified straight
links. Shortest lattice routes are then fed through the same
speed/swap pipeline as the exact planner.

Any lattice route is itself an admissible polyline, so the resulting
objective can never beat the exact optimum; it converges to it from above as
the step shrinks. A map can come out spuriously infeasible at a coarse step,
never spuriously feasible.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .geometry import NetworkMap, Point, chk_out, segment_covered
from .model import UavParams, energy_optimal_speed, energy_per_distance
from .planner import FlightLeg, PlanResult, SwapEvent, Trajectory, EMPTY_TRAJECTORY
from .planner_battery import (
    _edge_speed_energy,
    _global_search,
    _node_delay,
    _node_reserve,
    chk_sp,
)
from .planner import LocalRoute

# Hop offsets: all coprime (dx, dy) with max(|dx|, |dy|) <= NEIGHBOR_RANGE.
# Range 5 keeps the worst-case direction overhead below 0.5 percent.
NEIGHBOR_RANGE = 5
_MAX_CELLS = 80_000_000


def _canonical_moves(k: int) -> list[tuple[int, int]]:
    """Half-plane move set (dc, dr): dc > 0, or dc == 0 and dr > 0."""
    moves = [(0, 1)]
    for dc in range(1, k + 1):
        for dr in range(-k, k + 1):
            if math.gcd(dc, abs(dr)) == 1:
                moves.append((dc, dr))
    return moves


@njit(cache=True)
def _lattice_search(
    ny,
    nx,
    allowed,
    n_canon,
    dirs_dr,
    dirs_dc,
    dirs_w,
    bits,
    src_cells,
    src_g,
    link_cost,
    tgt_x,
    tgt_y,
    xs0,
    ys0,
    step,
):  # pragma: no cover - exercised through grid_oracle_plan
    """A* from seeded cells to an off-lattice target with verified link exits.

    allowed[cell] bit k says the hop in canonical direction k starting at
    that cell stays covered; the reverse hop is read from the neighbor's bit.
    link_cost[cell] is the verified straight-line exit cost to the target
    (inf when the cell is not a link cell). Returns (best_total, best_cell,
    parent) where parent[cell] encodes the inbound direction.
    """
    n_cells = ny * nx
    dist = np.full(n_cells, np.inf, dtype=np.float64)
    parent = np.full(n_cells, -1, dtype=np.int16)
    cap = 1 << 14
    heap_f = np.empty(cap, dtype=np.float64)
    heap_g = np.empty(cap, dtype=np.float64)
    heap_c = np.empty(cap, dtype=np.int64)
    size = 0

    best_total = np.inf
    best_cell = -1

    def push(f, g, cell, heap_f, heap_g, heap_c, size):
        i = size
        heap_f[i] = f
        heap_g[i] = g
        heap_c[i] = cell
        while i > 0:
            p = (i - 1) >> 1
            if heap_f[p] > heap_f[i] or (
                heap_f[p] == heap_f[i] and heap_c[p] > heap_c[i]
            ):
                heap_f[p], heap_f[i] = heap_f[i], heap_f[p]
                heap_g[p], heap_g[i] = heap_g[i], heap_g[p]
                heap_c[p], heap_c[i] = heap_c[i], heap_c[p]
                i = p
            else:
                break
        return size + 1

    for s in range(src_cells.shape[0]):
        cell = src_cells[s]
        g = src_g[s]
        if g < dist[cell]:
            dist[cell] = g
            parent[cell] = -2
            r = cell // nx
            c = cell % nx
            px = xs0 + c * step
            py = ys0 + r * step
            h = math.hypot(px - tgt_x, py - tgt_y)
            if size >= cap:
                new_cap = cap * 2
                nf = np.empty(new_cap, dtype=np.float64)
                ng = np.empty(new_cap, dtype=np.float64)
                nc = np.empty(new_cap, dtype=np.int64)
                nf[:size] = heap_f[:size]
                ng[:size] = heap_g[:size]
                nc[:size] = heap_c[:size]
                heap_f, heap_g, heap_c, cap = nf, ng, nc, new_cap
            size = push(g + h, g, cell, heap_f, heap_g, heap_c, size)

    while size > 0:
        f = heap_f[0]
        g = heap_g[0]
        u = heap_c[0]
        size -= 1
        heap_f[0] = heap_f[size]
        heap_g[0] = heap_g[size]
        heap_c[0] = heap_c[size]
        i = 0
        while True:
            l = 2 * i + 1
            rch = l + 1
            smallest = i
            if l < size and (
                heap_f[l] < heap_f[smallest]
                or (heap_f[l] == heap_f[smallest] and heap_c[l] < heap_c[smallest])
            ):
                smallest = l
            if rch < size and (
                heap_f[rch] < heap_f[smallest]
                or (heap_f[rch] == heap_f[smallest] and heap_c[rch] < heap_c[smallest])
            ):
                smallest = rch
            if smallest == i:
                break
            heap_f[i], heap_f[smallest] = heap_f[smallest], heap_f[i]
            heap_g[i], heap_g[smallest] = heap_g[smallest], heap_g[i]
            heap_c[i], heap_c[smallest] = heap_c[smallest], heap_c[i]
            i = smallest

        if f >= best_total:
            break
        if g != dist[u]:
            continue
        lc = link_cost[u]
        if np.isfinite(lc) and g + lc < best_total:
            best_total = g + lc
            best_cell = u
        r = u // nx
        c = u % nx
        for k in range(2 * n_canon):
            if k < n_canon:
                dr = dirs_dr[k]
                dc = dirs_dc[k]
                w = dirs_w[k]
                rr = r + dr
                cc = c + dc
                if rr < 0 or rr >= ny or cc < 0 or cc >= nx:
                    continue
                if allowed[u] & bits[k] == np.uint64(0):
                    continue
            else:
                kk = k - n_canon
                dr = -dirs_dr[kk]
                dc = -dirs_dc[kk]
                w = dirs_w[kk]
                rr = r + dr
                cc = c + dc
                if rr < 0 or rr >= ny or cc < 0 or cc >= nx:
                    continue
                v_cell = rr * nx + cc
                if allowed[v_cell] & bits[kk] == np.uint64(0):
                    continue
            v = rr * nx + cc
            ng_val = g + w
            if ng_val < dist[v]:
                dist[v] = ng_val
                parent[v] = k
                px = xs0 + cc * step
                py = ys0 + rr * step
                h = math.hypot(px - tgt_x, py - tgt_y)
                if size >= cap:
                    new_cap = cap * 2
                    nf = np.empty(new_cap, dtype=np.float64)
                    ngq = np.empty(new_cap, dtype=np.float64)
                    ncq = np.empty(new_cap, dtype=np.int64)
                    nf[:size] = heap_f[:size]
                    ngq[:size] = heap_g[:size]
                    ncq[:size] = heap_c[:size]
                    heap_f, heap_g, heap_c, cap = nf, ngq, ncq, new_cap
                size = push(ng_val + h, ng_val, v, heap_f, heap_g, heap_c, size)

    return best_total, best_cell, parent


@njit(cache=True)
def _edge_bits(cov, ny, nx, dirs_dr, dirs_dc, bits, n_canon):
    """Per-cell hop masks: bit k set when both hop endpoints share a disk.

    Also returns the (cell, direction) pairs whose endpoints are covered by
    different disks only; those need the exact whole-segment test.
    """
    allowed = np.zeros(cov.size, dtype=np.uint64)
    cap = 1 << 12
    cand_cell = np.empty(cap, dtype=np.int64)
    cand_dir = np.empty(cap, dtype=np.int16)
    n_cand = 0
    for r in range(ny):
        base = r * nx
        for c in range(nx):
            u = base + c
            mu = cov[u]
            if mu == np.uint64(0):
                continue
            for k in range(n_canon):
                rr = r + dirs_dr[k]
                cc = c + dirs_dc[k]
                if rr < 0 or rr >= ny or cc < 0 or cc >= nx:
                    continue
                mv = cov[rr * nx + cc]
                if mv == np.uint64(0):
                    continue
                if mu & mv != np.uint64(0):
                    allowed[u] |= bits[k]
                else:
                    if n_cand >= cap:
                        new_cap = cap * 2
                        nc_cell = np.empty(new_cap, dtype=np.int64)
                        nc_dir = np.empty(new_cap, dtype=np.int16)
                        nc_cell[:n_cand] = cand_cell[:n_cand]
                        nc_dir[:n_cand] = cand_dir[:n_cand]
                        cand_cell, cand_dir, cap = nc_cell, nc_dir, new_cap
                    cand_cell[n_cand] = u
                    cand_dir[n_cand] = k
                    n_cand += 1
    return allowed, cand_cell[:n_cand], cand_dir[:n_cand]


class _Lattice:
    """Covered-cell lattice with verified hop edges for one map and step."""

    def __init__(self, net: NetworkMap, step: float, neighbor_range: int):
        disks = [d for d in net.effective_disks if d[2] > 0.0]
        specials = [c.position for c in net.charging] + [net.u0, net.uF]
        xs = [x - r for x, y, r in disks] + [p[0] for p in specials]
        ys = [y - r for x, y, r in disks] + [p[1] for p in specials]
        self.x0 = min(xs)
        self.y0 = min(ys)
        x1 = max(x + r for x, y, r in disks) if disks else self.x0
        y1 = max(y + r for x, y, r in disks) if disks else self.y0
        x1 = max([x1] + [p[0] for p in specials])
        y1 = max([y1] + [p[1] for p in specials])
        self.step = step
        self.nx = int(math.floor((x1 - self.x0) / step)) + 1
        self.ny = int(math.floor((y1 - self.y0) / step)) + 1
        if self.nx * self.ny > _MAX_CELLS:
            raise ValueError(
                f"lattice of {self.nx}x{self.ny} cells exceeds the supported size; "
                "use a larger grid_step"
            )
        if len(net.stations) > 64:
            raise ValueError("the grid oracle supports at most 64 base stations")
        self.net = net

        xcoord = self.x0 + step * np.arange(self.nx)
        ycoord = self.y0 + step * np.arange(self.ny)
        cov = np.zeros((self.ny, self.nx), dtype=np.uint64)
        for m, (sx, sy, r) in enumerate(net.effective_disks):
            # Each disk only touches its own bounding box of cells.
            c_lo = max(0, int(math.ceil((sx - r - self.x0) / step)))
            c_hi = min(self.nx - 1, int(math.floor((sx + r - self.x0) / step)))
            r_lo = max(0, int(math.ceil((sy - r - self.y0) / step)))
            r_hi = min(self.ny - 1, int(math.floor((sy + r - self.y0) / step)))
            if c_lo > c_hi or r_lo > r_hi:
                continue
            dx2 = (xcoord[c_lo : c_hi + 1] - sx) ** 2
            dy2 = (ycoord[r_lo : r_hi + 1] - sy) ** 2
            inside = dy2[:, None] + dx2[None, :] <= r * r
            cov[r_lo : r_hi + 1, c_lo : c_hi + 1] |= inside.astype(np.uint64) << np.uint64(m)

        moves = _canonical_moves(neighbor_range)
        self.n_canon = len(moves)
        if self.n_canon > 64:
            raise ValueError("neighbor range too large for the 64-bit edge mask")
        self.dirs_dc = np.array([dc for dc, dr in moves], dtype=np.int64)
        self.dirs_dr = np.array([dr for dc, dr in moves], dtype=np.int64)
        self.dirs_w = step * np.hypot(
            self.dirs_dc.astype(np.float64), self.dirs_dr.astype(np.float64)
        )
        self.bits = np.uint64(1) << np.arange(self.n_canon, dtype=np.uint64)

        cov_flat = cov.reshape(-1)
        allowed, cand_cell, cand_dir = _edge_bits(
            cov_flat, self.ny, self.nx, self.dirs_dr, self.dirs_dc, self.bits, self.n_canon
        )
        # Endpoints in different disks: the segment may still be covered by
        # the union; verify those few exactly.
        for u, k in zip(cand_cell.tolist(), cand_dir.tolist()):
            r0, c0 = divmod(u, self.nx)
            p = self.cell_point(r0, c0)
            q = self.cell_point(r0 + int(self.dirs_dr[k]), c0 + int(self.dirs_dc[k]))
            if not chk_out(p, q, net):
                allowed[u] |= self.bits[k]
        self.allowed = allowed
        self.cov_flat = cov_flat
        self._route_cache: dict[tuple, tuple[float, tuple[Point, ...]] | None] = {}

    def cell_point(self, r: int, c: int) -> Point:
        return (self.x0 + c * self.step, self.y0 + r * self.step)

    def links(self, p: Point, radius: float) -> tuple[np.ndarray, np.ndarray]:
        """Covered cells within `radius` of p, reachable by a covered segment."""
        c_lo = max(0, int(math.ceil((p[0] - radius - self.x0) / self.step)))
        c_hi = min(self.nx - 1, int(math.floor((p[0] + radius - self.x0) / self.step)))
        r_lo = max(0, int(math.ceil((p[1] - radius - self.y0) / self.step)))
        r_hi = min(self.ny - 1, int(math.floor((p[1] + radius - self.y0) / self.step)))
        cells: list[int] = []
        costs: list[float] = []
        for r in range(r_lo, r_hi + 1):
            for c in range(c_lo, c_hi + 1):
                if self.cov_flat[r * self.nx + c] == 0:
                    continue
                q = self.cell_point(r, c)
                d = math.hypot(q[0] - p[0], q[1] - p[1])
                if d > radius:
                    continue
                if d == 0.0 or segment_covered(p, q, self.net):
                    cells.append(r * self.nx + c)
                    costs.append(d)
        return (
            np.array(cells, dtype=np.int64),
            np.array(costs, dtype=np.float64),
        )

    def _extract_points(
        self, p: Point, q: Point, exit_cell: int, parent: np.ndarray
    ) -> tuple[tuple[Point, ...], float]:
        cells = [int(exit_cell)]
        while parent[cells[-1]] >= 0:
            k = int(parent[cells[-1]])
            if k < self.n_canon:
                dr, dc = -int(self.dirs_dr[k]), -int(self.dirs_dc[k])
            else:
                kk = k - self.n_canon
                dr, dc = int(self.dirs_dr[kk]), int(self.dirs_dc[kk])
            r, c = divmod(cells[-1], self.nx)
            cells.append((r + dr) * self.nx + (c + dc))
        cells.reverse()
        pts: list[Point] = [p]
        pts.extend(self.cell_point(*divmod(cell, self.nx)) for cell in cells)
        pts.append(q)
        points = tuple(_drop_collinear(pts))
        length = math.fsum(
            math.hypot(b[0] - a[0], b[1] - a[1]) for a, b in zip(points, points[1:])
        )
        return points, length

    def _direct(self, p: Point, q: Point) -> tuple[float, tuple[Point, ...]] | None:
        if p == q:
            return (0.0, (p,))
        if segment_covered(p, q, self.net):
            return (math.hypot(q[0] - p[0], q[1] - p[1]), (p, q))
        return None

    def route(
        self,
        p: Point,
        q: Point,
        p_links: tuple[np.ndarray, np.ndarray],
        q_links: tuple[np.ndarray, np.ndarray],
    ) -> tuple[float, tuple[Point, ...]] | None:
        """Shortest verified route p -> q: direct segment or through the lattice."""
        key = (p, q)
        if key in self._route_cache:
            return self._route_cache[key]
        direct = self._direct(p, q)
        if p == q:
            self._route_cache[key] = direct
            return direct
        best_len = direct[0] if direct else math.inf
        best_points = direct[1] if direct else None
        if p_links[0].size and q_links[0].size:
            link_cost = np.full(self.ny * self.nx, np.inf, dtype=np.float64)
            link_cost[q_links[0]] = np.minimum(link_cost[q_links[0]], q_links[1])
            total, exit_cell, parent = _lattice_search(
                self.ny,
                self.nx,
                self.allowed,
                self.n_canon,
                self.dirs_dr,
                self.dirs_dc,
                self.dirs_w,
                self.bits,
                p_links[0],
                p_links[1],
                link_cost,
                q[0],
                q[1],
                self.x0,
                self.y0,
                self.step,
            )
            if exit_cell >= 0 and total < best_len:
                best_points, best_len = self._extract_points(p, q, int(exit_cell), parent)
        found = (best_len, best_points) if best_points is not None else None
        self._store(p, q, found)
        return found

    def _store(
        self, p: Point, q: Point, found: tuple[float, tuple[Point, ...]] | None
    ) -> None:
        self._route_cache[(p, q)] = found
        if (q, p) not in self._route_cache:
            reverse = None
            if found is not None:
                reverse = (found[0], tuple(reversed(found[1])))
            self._route_cache[(q, p)] = reverse


def _drop_collinear(points: list[Point]) -> list[Point]:
    """Remove interior points that continue the previous direction exactly."""
    if len(points) <= 2:
        return points
    out = [points[0]]
    for prev, cur, nxt in zip(points, points[1:], points[2:]):
        ux, uy = cur[0] - prev[0], cur[1] - prev[1]
        vx, vy = nxt[0] - cur[0], nxt[1] - cur[1]
        if ux * vy - uy * vx != 0.0 or ux * vx + uy * vy < 0.0:
            out.append(cur)
    out.append(points[-1])
    return out


_lattice_cache: dict[tuple, "_Lattice"] = {}
_LATTICE_CACHE_SIZE = 3


def _lattice_for(net: NetworkMap, step: float, neighbor_range: int) -> "_Lattice":
    key = (net, step, neighbor_range)
    hit = _lattice_cache.get(key)
    if hit is None:
        hit = _Lattice(net, step, neighbor_range)
        if len(_lattice_cache) >= _LATTICE_CACHE_SIZE:
            _lattice_cache.pop(next(iter(_lattice_cache)))
        _lattice_cache[key] = hit
    return hit


def grid_oracle_plan(
    net: NetworkMap,
    uav: UavParams,
    grid_step: float,
    mode: str = "time",
    battery: bool = True,
    *,
    link_radius: float | None = None,
    neighbor_range: int = NEIGHBOR_RANGE,
) -> PlanResult:
    """Plan over the covered lattice; an upper bound on the exact optimum.

    mode "time" minimizes flight time plus swap dwells (battery permitting);
    mode "energy" minimizes propulsion energy. With battery=False the battery
    and the charging stations are ignored and the route runs at the top
    (time) or energy-optimal (energy) speed.

    link_radius controls how far off-lattice points may reach to join the
    lattice (default 3 steps). Passing the same absolute value across nested
    steps makes refinement exactly monotone.
    """
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    if mode not in ("time", "energy"):
        raise ValueError(f"unknown mode {mode!r}")
    if link_radius is None:
        link_radius = 3.0 * grid_step
    lattice = _lattice_for(net, grid_step, neighbor_range)

    if not battery:
        p_links = lattice.links(net.u0, link_radius)
        q_links = lattice.links(net.uF, link_radius)
        found = lattice.route(net.u0, net.uF, p_links, q_links)
        if found is None or found[1] is None:
            return PlanResult(
                feasible=False, objective=math.inf,
                trajectory=EMPTY_TRAJECTORY, kind=mode,
            )
        length, points = found
        if mode == "time":
            speed = uav.top_speed
            objective = length / speed
        else:
            speed = energy_optimal_speed(uav)
            objective = length * energy_per_distance(speed, uav.total_weight, uav)
        legs = tuple(FlightLeg(a, b, speed) for a, b in zip(points, points[1:]))
        return PlanResult(
            feasible=True, objective=objective,
            trajectory=Trajectory(items=legs), kind=mode,
        )

    n = len(net.charging)
    u0_idx, uf_idx = n, n + 1
    node_points: list[Point] = [c.position for c in net.charging] + [net.u0, net.uF]
    stations = [i for i in range(n) if net.charging[i].available]
    origins = stations + [u0_idx]
    destinations = stations + [uf_idx]
    links = {
        i: lattice.links(node_points[i], link_radius)
        for i in sorted(set(origins + destinations))
    }

    routes: dict[tuple[int, int], LocalRoute] = {}
    for src in origins:
        for dst in destinations:
            if src == dst or (src, dst) in routes:
                continue
            found = lattice.route(node_points[src], node_points[dst], links[src], links[dst])
            for a, b in ((src, dst), (dst, src)):
                if a not in origins or b not in destinations or (a, b) in routes:
                    continue
                if found is None:
                    routes[(a, b)] = LocalRoute(src=a, dst=b, feasible_conn=False)
                    continue
                length, points = found
                pts = points if a == src else tuple(reversed(points))
                ok, v_max = chk_sp(length, uav, reserve=_node_reserve(net, a))
                routes[(a, b)] = LocalRoute(
                    src=a, dst=b, feasible_conn=True, length=length,
                    points=pts, v_max=v_max if ok else None,
                )

    edges: list[tuple[int, int, float]] = []
    edge_speed: dict[tuple[int, int], float] = {}
    for (src, dst), route in sorted(routes.items()):
        if not route.feasible_conn or route.v_max is None:
            continue
        if mode == "time":
            edges.append((src, dst, route.length / route.v_max + _node_delay(net, dst)))
            edge_speed[(src, dst)] = route.v_max
        else:
            picked = _edge_speed_energy(route, uav)
            if picked is None:
                continue
            v_e, energy = picked
            edges.append((src, dst, energy))
            edge_speed[(src, dst)] = v_e

    all_routes = tuple(routes[key] for key in sorted(routes))
    found_global = _global_search(n + 2, edges, u0_idx, uf_idx)
    if found_global is None:
        return PlanResult(
            feasible=False, objective=math.inf, trajectory=EMPTY_TRAJECTORY,
            kind=mode, local_routes=all_routes,
        )
    objective, node_path = found_global
    items: list[FlightLeg | SwapEvent] = []
    for a, b in zip(node_path, node_path[1:]):
        route = routes[(a, b)]
        v = edge_speed[(a, b)]
        items.extend(FlightLeg(p, q, v) for p, q in zip(route.points, route.points[1:]))
        if b < n:
            items.append(SwapEvent(station=b, dwell=net.charging[b].delay))
    return PlanResult(
        feasible=True, objective=objective,
        trajectory=Trajectory(items=tuple(items)), kind=mode,
        local_routes=all_routes,
    )
