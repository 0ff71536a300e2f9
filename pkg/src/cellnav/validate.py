"""Independent trajectory verification against the mission constraints.

The validator re-derives every constraint from the map and drone parameters
alone: terminal endpoints, leg-by-leg coverage (exact interval test, no
sampling), speed-set membership, per-stretch battery bookkeeping in closed
form, and swap placement/dwell. It shares no state with the planners, so a
planner bug cannot hide from it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import NetworkMap, point_coverage_margin, segment_covered
from .model import UavParams, propulsion_power
from .planner import FlightLeg, SwapEvent, Trajectory
from .oracle import grid_oracle_plan

__all__ = [
    "ConstraintCheck",
    "ValidationReport",
    "validate_trajectory",
    "grid_oracle_plan",
]

POSITION_TOL = 1e-6  # m
SPEED_REL_TOL = 1e-12
ENERGY_REL_TOL = 1e-9
_MARGIN_SAMPLES = 32  # interior sample points per leg for the reported margin


@dataclass(frozen=True)
class ConstraintCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    checks: tuple[ConstraintCheck, ...]
    worst_connectivity_margin: float
    min_battery_margin: float

    def check(self, name: str) -> ConstraintCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _points_close(p, q, tol: float = POSITION_TOL) -> bool:
    return abs(p[0] - q[0]) <= tol and abs(p[1] - q[1]) <= tol


def validate_trajectory(
    net: NetworkMap, uav: UavParams, traj: Trajectory
) -> ValidationReport:
    """Check a trajectory against every mission constraint.

    Returns a report rather than raising: each constraint contributes one
    named entry, and `passed` is their conjunction. The battery account
    starts full at the initial point and resets to full (minus any station
    surcharge) after every swap.
    """
    legs = traj.legs
    checks: list[ConstraintCheck] = []

    # Structural continuity plus terminal endpoints.
    continuity_ok = True
    detail = ""
    prev_end = None
    for i, item in enumerate(traj.items):
        if isinstance(item, FlightLeg):
            if prev_end is not None and not _points_close(item.start, prev_end):
                continuity_ok = False
                detail = f"leg {i} starts away from the previous position"
                break
            prev_end = item.end
        # swap events do not move the drone
    checks.append(ConstraintCheck("continuity", continuity_ok, detail))

    if legs:
        endpoints_ok = _points_close(legs[0].start, net.u0) and _points_close(
            legs[-1].end, net.uF
        )
        endpoint_detail = "" if endpoints_ok else "terminals do not match u0/uF"
    else:
        endpoints_ok = _points_close(net.u0, net.uF)
        endpoint_detail = "" if endpoints_ok else "empty trajectory but u0 != uF"
    checks.append(ConstraintCheck("endpoints", endpoints_ok, endpoint_detail))

    # Coverage, exactly, for every leg; plus the terminal points themselves.
    coverage_ok = True
    coverage_detail = ""
    worst_margin = min(
        point_coverage_margin(net.u0, net), point_coverage_margin(net.uF, net)
    )
    for i, leg in enumerate(legs):
        if not segment_covered(leg.start, leg.end, net):
            coverage_ok = False
            if not coverage_detail:
                coverage_detail = f"leg {i} leaves coverage"
        for k in range(_MARGIN_SAMPLES + 1):
            xi = k / _MARGIN_SAMPLES
            p = (
                leg.start[0] + xi * (leg.end[0] - leg.start[0]),
                leg.start[1] + xi * (leg.end[1] - leg.start[1]),
            )
            margin = point_coverage_margin(p, net)
            if margin < worst_margin:
                worst_margin = margin
    checks.append(ConstraintCheck("connectivity", coverage_ok, coverage_detail))

    # Speed-set membership.
    speeds_ok = True
    speeds_detail = ""
    for i, leg in enumerate(legs):
        if not any(
            math.isclose(leg.speed, v, rel_tol=SPEED_REL_TOL, abs_tol=0.0)
            for v in uav.speeds
            if v > 0
        ):
            speeds_ok = False
            speeds_detail = f"leg {i} speed {leg.speed!r} is not in the allowed set"
            break
    checks.append(ConstraintCheck("speeds", speeds_ok, speeds_detail))

    # Battery bookkeeping: closed-form energy per leg, reset at swaps.
    budget = uav.battery.usable_energy(uav.battery_weight)
    w = uav.total_weight
    eta = uav.battery.transfer_ratio
    battery_ok = True
    battery_detail = ""
    min_battery_margin = math.inf
    stretch_energy: list[float] = []
    stretch_budget = budget
    stretch_index = 0

    def close_stretch() -> None:
        nonlocal battery_ok, battery_detail, min_battery_margin, stretch_index
        used = math.fsum(stretch_energy)
        margin = stretch_budget - used
        if margin < min_battery_margin:
            min_battery_margin = margin
        if used > stretch_budget * (1.0 + ENERGY_REL_TOL):
            battery_ok = False
            if not battery_detail:
                battery_detail = (
                    f"stretch {stretch_index} consumes {used:.6f} J with only "
                    f"{stretch_budget:.6f} J usable"
                )
        stretch_index += 1

    for item in traj.items:
        if isinstance(item, FlightLeg):
            if item.speed > 0:
                power = propulsion_power(item.speed, w, uav.power)
                stretch_energy.append(item.time * power / eta)
        else:
            close_stretch()
            stretch_energy = []
            surcharge = (
                net.charging[item.station].surcharge
                if 0 <= item.station < len(net.charging)
                else 0.0
            )
            stretch_budget = budget - surcharge
    close_stretch()
    checks.append(ConstraintCheck("battery", battery_ok, battery_detail))

    # Swap placement and dwell.
    swaps_ok = True
    swaps_detail = ""
    position = net.u0
    for i, item in enumerate(traj.items):
        if isinstance(item, FlightLeg):
            position = item.end
            continue
        swap: SwapEvent = item
        if not 0 <= swap.station < len(net.charging):
            swaps_ok = False
            swaps_detail = f"swap {i} references unknown station {swap.station}"
            break
        station = net.charging[swap.station]
        if not station.available:
            swaps_ok = False
            swaps_detail = f"swap {i} uses unavailable station {swap.station}"
            break
        if not _points_close(position, station.position):
            swaps_ok = False
            swaps_detail = f"swap {i} occurs away from station {swap.station}"
            break
        if not math.isclose(swap.dwell, station.delay, rel_tol=1e-12, abs_tol=1e-12):
            swaps_ok = False
            swaps_detail = (
                f"swap {i} dwell {swap.dwell!r} != station delay {station.delay!r}"
            )
            break
    checks.append(ConstraintCheck("swaps", swaps_ok, swaps_detail))

    return ValidationReport(
        passed=all(c.passed for c in checks),
        checks=tuple(checks),
        worst_connectivity_margin=worst_margin,
        min_battery_margin=min_battery_margin,
    )
