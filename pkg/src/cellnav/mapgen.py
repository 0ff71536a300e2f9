"""Seeded random map generation with feasibility rejection.

Positions are drawn uniformly over a square and coverage offsets uniformly
over [0, offset_max]; a draw is kept only if the battery-aware planner finds
a feasible route between the terminals, mirroring how evaluation maps are
usually sampled. The generator is Python's Mersenne Twister, so a seed yields
the same map on every platform.
"""

from __future__ import annotations

import random

from .geometry import BaseStation, ChargingStation, MapValidationError, NetworkMap
from .model import UavParams, base_coverage_radius, default_comm_params, default_uav_params
from .planner_battery import plan_min_time

DEFAULT_OFFSET_MAX = 800.0
DEFAULT_TAU = 100.0


def generate_map(
    seed: int,
    m: int,
    n: int,
    size: float = 10_000.0,
    uav: UavParams | None = None,
    *,
    d0: float | None = None,
    tau: float = DEFAULT_TAU,
    offset_max: float = DEFAULT_OFFSET_MAX,
    altitude: float = 100.0,
    max_tries: int = 1000,
) -> NetworkMap:
    """A feasible random map with m base stations and n charging stations.

    Infeasible draws (no battery-respecting route from u0 to uF) are
    rejected and redrawn from the same stream, so the result is a
    deterministic function of the arguments.
    """
    if m < 1:
        raise ValueError("at least one base station is required")
    if n < 0:
        raise ValueError("charging station count must be nonnegative")
    if uav is None:
        uav = default_uav_params()
    if d0 is None:
        d0 = base_coverage_radius(default_comm_params())
    rng = random.Random(seed)
    lam_max = min(offset_max, d0)
    for _ in range(max_tries):
        stations = tuple(
            BaseStation(
                x=rng.uniform(0.0, size),
                y=rng.uniform(0.0, size),
                offset=rng.uniform(0.0, lam_max),
            )
            for _ in range(m)
        )
        charging = tuple(
            ChargingStation(x=rng.uniform(0.0, size), y=rng.uniform(0.0, size), delay=tau)
            for _ in range(n)
        )
        u0 = (rng.uniform(0.0, size), rng.uniform(0.0, size))
        uF = (rng.uniform(0.0, size), rng.uniform(0.0, size))
        try:
            net = NetworkMap(
                d0=d0,
                stations=stations,
                charging=charging,
                u0=u0,
                uF=uF,
                altitude=altitude,
                cs_altitude=altitude,
            )
        except MapValidationError:
            continue
        if plan_min_time(net, uav).feasible:
            return net
    raise RuntimeError(
        f"no feasible map found in {max_tries} draws (seed={seed}, m={m}, n={n})"
    )
