"""Parameter sweeps and scaling probes over seeded random maps.

Each sweep point re-plans one seeded map with a single knob changed (swap
delay, battery weight, payload, fixed speed, or the set of unavailable
stations) and records the objective. Tables are plain TSV, deterministic for
a given spec.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass, field

from .geometry import ChargingStation, NetworkMap
from .model import UavParams, default_uav_params
from .planner_battery import plan_min_energy, plan_min_time
from .mapgen import generate_map

SWEEP_VARIABLES = ("tau", "w2", "w3", "v_fix", "unavailable")


@dataclass(frozen=True)
class ExperimentSpec:
    """One sweep: a seeded map, a variable to vary, and the values to try."""

    seed: int
    stations: int
    charging: int
    variable: str
    values: tuple
    size: float = 10_000.0
    objective: str = "time"
    station_index: int = 0
    uav: UavParams = field(default_factory=default_uav_params)

    def __post_init__(self) -> None:
        if self.variable not in SWEEP_VARIABLES:
            raise ValueError(f"unknown sweep variable {self.variable!r}")
        if not self.values:
            raise ValueError("sweep values must be nonempty")
        if self.objective not in ("time", "energy"):
            raise ValueError(f"unknown objective {self.objective!r}")


@dataclass(frozen=True)
class SweepRow:
    label: str
    objective: float
    feasible: bool


def _with_delay(net: NetworkMap, index: int, delay: float) -> NetworkMap:
    charging = list(net.charging)
    old = charging[index]
    charging[index] = ChargingStation(x=old.x, y=old.y, delay=delay, surcharge=old.surcharge)
    return NetworkMap(
        d0=net.d0, stations=net.stations, charging=tuple(charging),
        u0=net.u0, uF=net.uF, altitude=net.altitude, cs_altitude=net.cs_altitude,
    )


def _with_unavailable(net: NetworkMap, indices) -> NetworkMap:
    out = net
    for i in indices:
        out = _with_delay(out, int(i), math.inf)
    return out


def _with_battery_weight(uav: UavParams, w2: float) -> UavParams:
    return UavParams(
        body_weight=uav.body_weight, battery_weight=w2,
        payload_weight=uav.payload_weight, speeds=uav.speeds,
        power=uav.power, battery=uav.battery,
    )


def _with_speed_pair(uav: UavParams, v_fix: float) -> UavParams:
    return UavParams(
        body_weight=uav.body_weight, battery_weight=uav.battery_weight,
        payload_weight=uav.payload_weight, speeds=(0.0, float(v_fix)),
        power=uav.power, battery=uav.battery,
    )


def sweep(spec: ExperimentSpec) -> list[SweepRow]:
    """Plan once per sweep value; infeasible points are recorded, not fatal."""
    base_net = generate_map(spec.seed, spec.stations, spec.charging, spec.size, spec.uav)
    planner = plan_min_time if spec.objective == "time" else plan_min_energy
    rows: list[SweepRow] = []
    for value in spec.values:
        net, uav = base_net, spec.uav
        if spec.variable == "tau":
            net = _with_delay(base_net, spec.station_index, float(value))
            label = format(float(value), ".17g")
        elif spec.variable == "w2":
            uav = _with_battery_weight(spec.uav, float(value))
            label = format(float(value), ".17g")
        elif spec.variable == "w3":
            uav = spec.uav.with_payload(float(value))
            label = format(float(value), ".17g")
        elif spec.variable == "v_fix":
            uav = _with_speed_pair(spec.uav, float(value))
            label = format(float(value), ".17g")
        else:  # unavailable
            indices = tuple(value) if isinstance(value, (tuple, list)) else (int(value),)
            net = _with_unavailable(base_net, indices)
            label = ",".join(str(int(i)) for i in indices) or "-"
        result = planner(net, uav)
        rows.append(SweepRow(label=label, objective=result.objective, feasible=result.feasible))
    return rows


def sweep_table(spec: ExperimentSpec) -> str:
    lines = [f"# sweep variable={spec.variable} objective={spec.objective} seed={spec.seed}"]
    lines.append("value\tobjective\tfeasible")
    for row in sweep(spec):
        obj = "inf" if math.isinf(row.objective) else format(row.objective, ".17g")
        lines.append(f"{row.label}\t{obj}\t{int(row.feasible)}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ProbeRow:
    stations: int
    charging: int
    median_seconds: float
    local_routes: int


def scaling_probe(
    m_values,
    n_values,
    repetitions: int = 3,
    seed: int = 0,
    size: float = 10_000.0,
    uav: UavParams | None = None,
) -> list[ProbeRow]:
    """Median wall-clock time of the battery-aware planner per problem size."""
    if uav is None:
        uav = default_uav_params()
    rows: list[ProbeRow] = []
    for m in m_values:
        for n in n_values:
            net = generate_map(seed, int(m), int(n), size, uav)
            times = []
            routes = 0
            for _ in range(max(1, int(repetitions))):
                t0 = time.perf_counter()
                result = plan_min_time(net, uav)
                times.append(time.perf_counter() - t0)
                routes = len(result.local_routes)
            rows.append(
                ProbeRow(
                    stations=int(m),
                    charging=int(n),
                    median_seconds=statistics.median(times),
                    local_routes=routes,
                )
            )
    return rows


def probe_table(rows: list[ProbeRow]) -> str:
    lines = ["M\tN\tmedian_seconds\tlocal_routes"]
    for r in rows:
        lines.append(
            f"{r.stations}\t{r.charging}\t{format(r.median_seconds, '.6g')}\t{r.local_routes}"
        )
    slope = loglog_slope(rows)
    if slope is not None:
        lines.append(f"# log-log slope over M: {format(slope, '.3g')}")
    return "\n".join(lines) + "\n"


def loglog_slope(rows: list[ProbeRow]) -> float | None:
    """Least-squares slope of log(time) vs log(M); None with < 2 sizes."""
    by_m: dict[int, list[float]] = {}
    for r in rows:
        by_m.setdefault(r.stations, []).append(r.median_seconds)
    if len(by_m) < 2:
        return None
    xs = [math.log(m) for m in sorted(by_m)]
    ys = [math.log(statistics.median(by_m[m])) for m in sorted(by_m)]
    mean_x = statistics.fmean(xs)
    mean_y = statistics.fmean(ys)
    num = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    den = sum((x - mean_x) ** 2 for x in xs)
    return num / den if den else None
