"""Coverage-constrained UAV route planning with battery swaps.

A drone must fly from an initial to a final point while staying inside the
union of base-station coverage disks and within its battery range, swapping
batteries at charging stations as needed. The package provides exact
minimum-time, minimum-energy, and maximum-payload planners, an independent
trajectory validator, a lattice cross-check oracle, JSON document schemas,
and a deterministic CLI.
"""

from .geometry import (
    BaseStation,
    ChargingStation,
    CoverageInterval,
    MapValidationError,
    NetworkMap,
    chk_fea,
    chk_out,
    circle_intersections,
    segment_coverage_intervals,
)
from .graph import PlanGraph, bfs_reachable, dijkstra
from .model import (
    BatteryParams,
    CommParams,
    NoCoverageError,
    PowerParams,
    UavParams,
    base_coverage_radius,
    default_comm_params,
    default_uav_params,
    energy_optimal_speed,
    expected_snr,
    los_probability,
    max_flight_distance,
    propulsion_power,
)
from .payload import BottleneckResult, PayloadQuery, PayloadResult, bottleneck_edge, max_payload
from .planner import (
    FlightLeg,
    LocalRoute,
    PlanResult,
    SwapEvent,
    Trajectory,
    build_intersection_vertices,
    plan_unlimited,
)
from .planner_battery import (
    chk_sp,
    fixed_speed_energy_bound,
    local_route,
    plan_min_energy,
    plan_min_time,
    precompute_edge_sets,
)
from .validate import ValidationReport, grid_oracle_plan, validate_trajectory

__version__ = "0.1.0"
