"""JSON document schemas: maps, drone configs, trajectories, reports.

Serialization is deterministic byte-for-byte: insertion-ordered keys, floats
rendered with 17 significant digits (exact double round-trip), infinities as
the string "inf", two-space indentation, one trailing newline. Parsing names
the offending field in every diagnostic.
"""

from __future__ import annotations

import json
import math
from typing import Any

from .geometry import BaseStation, ChargingStation, NetworkMap
from .model import (
    BatteryParams,
    CommParams,
    PowerParams,
    UavParams,
    base_coverage_radius,
    default_uav_params,
)
from .planner import FlightLeg, PlanResult, SwapEvent, Trajectory
from .validate import ValidationReport

MAP_SCHEMA = "map/1"
UAV_SCHEMA = "uav/1"
TRAJECTORY_SCHEMA = "trajectory/1"


class DocumentError(ValueError):
    """A document failed to parse or violates its schema."""


# -- deterministic writer ----------------------------------------------------

def _fmt_float(x: float) -> str:
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if math.isnan(x):
        raise ValueError("NaN is not representable in documents")
    return format(x, ".17g")


def _render(obj: Any, indent: int) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [
            f'{pad}  {json.dumps(str(k))}: {_render(v, indent + 1)}'
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        items = list(obj)
        if not items:
            return "[]"
        if all(isinstance(v, (int, float, str, bool)) for v in items):
            return "[" + ", ".join(_render(v, 0) for v in items) + "]"
        parts = [f"{pad}  {_render(v, indent + 1)}" for v in items]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc: dict) -> str:
    return _render(doc, 0) + "\n"


# -- field access helpers ----------------------------------------------------

def _get(doc: dict, field: str, kind: type, where: str) -> Any:
    if field not in doc:
        raise DocumentError(f"{where}: missing field '{field}'")
    value = doc[field]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise DocumentError(f"{where}: field '{field}' must be a number")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise DocumentError(f"{where}: field '{field}' must be an integer")
        return value
    if not isinstance(value, kind):
        raise DocumentError(f"{where}: field '{field}' must be {kind.__name__}")
    return value


def _get_point(doc: dict, field: str, where: str) -> tuple[float, float]:
    value = _get(doc, field, list, where)
    if len(value) != 2 or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        raise DocumentError(f"{where}: field '{field}' must be [x, y]")
    return (float(value[0]), float(value[1]))


def _get_tau(entry: dict, where: str) -> float:
    if "tau" not in entry:
        raise DocumentError(f"{where}: missing field 'tau'")
    value = entry["tau"]
    if value == "inf":
        return math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DocumentError(f"{where}: field 'tau' must be a number or \"inf\"")
    return float(value)


def loads(text: str, where: str = "document") -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{where}: not valid JSON ({exc.msg} at line {exc.lineno})")
    if not isinstance(doc, dict):
        raise DocumentError(f"{where}: top level must be an object")
    return doc


# -- map documents -----------------------------------------------------------

def map_to_doc(net: NetworkMap, comm: CommParams | None = None) -> dict:
    doc: dict[str, Any] = {"schema": MAP_SCHEMA}
    if comm is not None:
        doc["comm"] = {
            "bs_height": comm.bs_height,
            "sinr_threshold": comm.sinr_threshold,
            "snr_ref": comm.snr_ref,
            "mu1": comm.mu1,
            "mu2": comm.mu2,
            "excess_los": comm.excess_los,
            "excess_nlos": comm.excess_nlos,
        }
    else:
        doc["d0"] = net.d0
    doc["stations"] = [
        {"x": s.x, "y": s.y, "lambda": s.offset} for s in net.stations
    ]
    doc["charging"] = [
        {
            "x": c.x,
            "y": c.y,
            "tau": "inf" if math.isinf(c.delay) else c.delay,
            "surcharge": c.surcharge,
        }
        for c in net.charging
    ]
    doc["u0"] = list(net.u0)
    doc["uF"] = list(net.uF)
    doc["altitude"] = net.altitude
    doc["cs_altitude"] = net.cs_altitude
    return doc


def map_from_doc(doc: dict) -> NetworkMap:
    where = "map document"
    schema = _get(doc, "schema", str, where)
    if schema != MAP_SCHEMA:
        raise DocumentError(f"{where}: unsupported schema {schema!r}")
    altitude = _get(doc, "altitude", float, where) if "altitude" in doc else 100.0
    cs_altitude = _get(doc, "cs_altitude", float, where) if "cs_altitude" in doc else altitude
    if ("d0" in doc) == ("comm" in doc):
        raise DocumentError(f"{where}: exactly one of 'd0' or 'comm' is required")
    if "d0" in doc:
        d0 = _get(doc, "d0", float, where)
    else:
        comm_doc = _get(doc, "comm", dict, where)
        comm = CommParams(
            altitude=altitude,
            bs_height=_get(comm_doc, "bs_height", float, f"{where}: comm"),
            sinr_threshold=_get(comm_doc, "sinr_threshold", float, f"{where}: comm"),
            snr_ref=_get(comm_doc, "snr_ref", float, f"{where}: comm"),
            mu1=_get(comm_doc, "mu1", float, f"{where}: comm"),
            mu2=_get(comm_doc, "mu2", float, f"{where}: comm"),
            excess_los=_get(comm_doc, "excess_los", float, f"{where}: comm"),
            excess_nlos=_get(comm_doc, "excess_nlos", float, f"{where}: comm"),
        )
        d0 = base_coverage_radius(comm)
    stations_doc = _get(doc, "stations", list, where)
    stations = []
    for i, entry in enumerate(stations_doc):
        sub = f"{where}: stations[{i}]"
        if not isinstance(entry, dict):
            raise DocumentError(f"{sub} must be an object")
        stations.append(
            BaseStation(
                x=_get(entry, "x", float, sub),
                y=_get(entry, "y", float, sub),
                offset=_get(entry, "lambda", float, sub) if "lambda" in entry else 0.0,
            )
        )
    charging_doc = doc.get("charging", [])
    if not isinstance(charging_doc, list):
        raise DocumentError(f"{where}: field 'charging' must be a list")
    charging = []
    for i, entry in enumerate(charging_doc):
        sub = f"{where}: charging[{i}]"
        if not isinstance(entry, dict):
            raise DocumentError(f"{sub} must be an object")
        charging.append(
            ChargingStation(
                x=_get(entry, "x", float, sub),
                y=_get(entry, "y", float, sub),
                delay=_get_tau(entry, sub),
                surcharge=_get(entry, "surcharge", float, sub) if "surcharge" in entry else 0.0,
            )
        )
    try:
        return NetworkMap(
            d0=d0,
            stations=tuple(stations),
            charging=tuple(charging),
            u0=_get_point(doc, "u0", where),
            uF=_get_point(doc, "uF", where),
            altitude=altitude,
            cs_altitude=cs_altitude,
        )
    except ValueError as exc:
        raise DocumentError(f"{where}: {exc}")


def map_coverage_radius(doc: dict) -> float:
    """The map's d0, deriving it from the comm block when present."""
    return map_from_doc(doc).d0


# -- drone documents ---------------------------------------------------------

def uav_to_doc(uav: UavParams) -> dict:
    return {
        "schema": UAV_SCHEMA,
        "body_weight": uav.body_weight,
        "battery_weight": uav.battery_weight,
        "payload_weight": uav.payload_weight,
        "speeds": list(uav.speeds),
        "power": {
            "delta_p": uav.power.delta_p,
            "n_rotors": uav.power.n_rotors,
            "n_blades": uav.power.n_blades,
            "chord": uav.power.chord,
            "rotor_radius": uav.power.rotor_radius,
            "tip_speed": uav.power.tip_speed,
            "correction_factor": uav.power.correction_factor,
            "flat_plate_area": uav.power.flat_plate_area,
            "air_density": uav.power.air_density,
            "gravity": uav.power.gravity,
        },
        "battery": {
            "energy_density": uav.battery.energy_density,
            "depth_of_discharge": uav.battery.depth_of_discharge,
            "transfer_ratio": uav.battery.transfer_ratio,
            "reserve_factor": uav.battery.reserve_factor,
        },
    }


def uav_from_doc(doc: dict) -> UavParams:
    where = "uav document"
    schema = _get(doc, "schema", str, where)
    if schema != UAV_SCHEMA:
        raise DocumentError(f"{where}: unsupported schema {schema!r}")
    power_doc = _get(doc, "power", dict, where)
    battery_doc = _get(doc, "battery", dict, where)
    speeds = _get(doc, "speeds", list, where)
    try:
        power = PowerParams(
            delta_p=_get(power_doc, "delta_p", float, f"{where}: power"),
            n_rotors=_get(power_doc, "n_rotors", int, f"{where}: power"),
            n_blades=_get(power_doc, "n_blades", int, f"{where}: power"),
            chord=_get(power_doc, "chord", float, f"{where}: power"),
            rotor_radius=_get(power_doc, "rotor_radius", float, f"{where}: power"),
            tip_speed=_get(power_doc, "tip_speed", float, f"{where}: power"),
            correction_factor=_get(power_doc, "correction_factor", float, f"{where}: power"),
            flat_plate_area=_get(power_doc, "flat_plate_area", float, f"{where}: power"),
            air_density=_get(power_doc, "air_density", float, f"{where}: power"),
            gravity=_get(power_doc, "gravity", float, f"{where}: power"),
        )
        battery = BatteryParams(
            energy_density=_get(battery_doc, "energy_density", float, f"{where}: battery"),
            depth_of_discharge=_get(battery_doc, "depth_of_discharge", float, f"{where}: battery"),
            transfer_ratio=_get(battery_doc, "transfer_ratio", float, f"{where}: battery"),
            reserve_factor=_get(battery_doc, "reserve_factor", float, f"{where}: battery"),
        )
        return UavParams(
            body_weight=_get(doc, "body_weight", float, where),
            battery_weight=_get(doc, "battery_weight", float, where),
            payload_weight=_get(doc, "payload_weight", float, where),
            speeds=tuple(float(v) for v in speeds),
            power=power,
            battery=battery,
        )
    except DocumentError:
        raise
    except ValueError as exc:
        raise DocumentError(f"{where}: {exc}")


def default_uav_doc() -> dict:
    return uav_to_doc(default_uav_params())


# -- trajectory documents ----------------------------------------------------

def result_to_doc(result: PlanResult, uav: UavParams) -> dict:
    traj = result.trajectory
    legs = []
    swaps = []
    leg_index = -1
    for item in traj.items:
        if isinstance(item, FlightLeg):
            leg_index += 1
            legs.append(
                {
                    "start": list(item.start),
                    "end": list(item.end),
                    "speed": item.speed,
                    "time": item.time,
                    "energy": item.energy(uav),
                }
            )
        else:
            swaps.append(
                {"station": item.station, "tau": item.dwell, "after_leg": leg_index}
            )
    return {
        "schema": TRAJECTORY_SCHEMA,
        "feasible": result.feasible,
        "objective": result.kind,
        "value": result.objective,
        "total_time": traj.total_time if result.feasible else math.inf,
        "total_distance": traj.total_distance,
        "total_energy": traj.total_energy(uav),
        "legs": legs,
        "swaps": swaps,
    }


def trajectory_from_doc(doc: dict) -> Trajectory:
    where = "trajectory document"
    schema = _get(doc, "schema", str, where)
    if schema != TRAJECTORY_SCHEMA:
        raise DocumentError(f"{where}: unsupported schema {schema!r}")
    legs_doc = _get(doc, "legs", list, where)
    swaps_doc = _get(doc, "swaps", list, where)
    legs: list[FlightLeg] = []
    for i, entry in enumerate(legs_doc):
        sub = f"{where}: legs[{i}]"
        if not isinstance(entry, dict):
            raise DocumentError(f"{sub} must be an object")
        legs.append(
            FlightLeg(
                start=_get_point(entry, "start", sub),
                end=_get_point(entry, "end", sub),
                speed=_get(entry, "speed", float, sub),
            )
        )
    swaps_by_leg: dict[int, list[SwapEvent]] = {}
    for i, entry in enumerate(swaps_doc):
        sub = f"{where}: swaps[{i}]"
        if not isinstance(entry, dict):
            raise DocumentError(f"{sub} must be an object")
        after = _get(entry, "after_leg", int, sub)
        if not -1 <= after < len(legs):
            raise DocumentError(f"{sub}: 'after_leg' out of range")
        swaps_by_leg.setdefault(after, []).append(
            SwapEvent(station=_get(entry, "station", int, sub), dwell=_get_tau(entry, sub))
        )
    items: list[FlightLeg | SwapEvent] = []
    for event in swaps_by_leg.get(-1, []):
        items.append(event)
    for i, leg in enumerate(legs):
        items.append(leg)
        items.extend(swaps_by_leg.get(i, []))
    return Trajectory(items=tuple(items))


def report_to_doc(report: ValidationReport) -> dict:
    return {
        "schema": "validation/1",
        "passed": report.passed,
        "checks": [
            {"name": c.name, "passed": c.passed, "detail": c.detail}
            for c in report.checks
        ],
        "worst_connectivity_margin": report.worst_connectivity_margin,
        "min_battery_margin": report.min_battery_margin,
    }
