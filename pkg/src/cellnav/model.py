"""Rotary-wing propulsion, battery range, and cell-coverage radius models.

All functions here are pure and operate on immutable parameter records, so
they are safe to call concurrently. Angles are in degrees, distances in
meters, powers in watts, energies in joules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class NoCoverageError(ValueError):
    """Raised when the link budget cannot meet the SINR threshold anywhere."""


def _require_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class PowerParams:
    """Rotorcraft propulsion-power coefficients.

    delta_p: profile drag coefficient (dimensionless)
    n_rotors / n_blades: rotor count and blades per rotor
    chord: blade chord length (m)
    rotor_radius: rotor radius (m)
    tip_speed: blade tip speed (m/s)
    correction_factor: incremental correction applied to induced power
    flat_plate_area: fuselage equivalent flat-plate area (m^2)
    air_density: (kg/m^3)
    gravity: (m/s^2)
    """

    delta_p: float
    n_rotors: int
    n_blades: int
    chord: float
    rotor_radius: float
    tip_speed: float
    correction_factor: float
    flat_plate_area: float
    air_density: float
    gravity: float

    def __post_init__(self) -> None:
        for name in (
            "delta_p", "n_rotors", "n_blades", "chord", "rotor_radius",
            "tip_speed", "correction_factor", "flat_plate_area",
            "air_density", "gravity",
        ):
            value = getattr(self, name)
            _require_finite(name, float(value))
            if value <= 0:
                raise ValueError(f"{name} must be strictly positive, got {value!r}")

    @property
    def profile_power(self) -> float:
        """Blade profile power at hover (the speed-independent factor)."""
        return (
            (self.delta_p * self.air_density / 8.0)
            * (self.n_rotors * self.n_blades * self.chord * self.rotor_radius)
            * self.tip_speed ** 3
        )

    def induced_power(self, total_weight: float) -> float:
        """Induced power at hover for the given total weight (kg)."""
        thrust = total_weight * self.gravity
        return (1.0 + self.correction_factor) * thrust ** 1.5 / math.sqrt(self._disc_loading_denom())

    def hover_induced_speed(self, total_weight: float) -> float:
        """Mean rotor induced speed at hover (m/s) for the given weight."""
        return math.sqrt(total_weight * self.gravity / self._disc_loading_denom())

    def _disc_loading_denom(self) -> float:
        return 2.0 * self.air_density * self.n_rotors * math.pi * self.rotor_radius ** 2


@dataclass(frozen=True)
class BatteryParams:
    """Battery capacity and usability coefficients.

    energy_density: J per kg of battery weight
    depth_of_discharge: usable fraction of a full charge, in (0, 1)
    transfer_ratio: fraction of drawn energy delivered past circuit losses, in (0, 1)
    reserve_factor: safety divisor (> 1) holding back energy for contingencies
    """

    energy_density: float
    depth_of_discharge: float
    transfer_ratio: float
    reserve_factor: float

    def __post_init__(self) -> None:
        for name in ("energy_density", "depth_of_discharge", "transfer_ratio", "reserve_factor"):
            _require_finite(name, getattr(self, name))
        if self.energy_density <= 0:
            raise ValueError("energy_density must be positive")
        if not 0.0 < self.depth_of_discharge < 1.0:
            raise ValueError("depth_of_discharge must lie in (0, 1)")
        if not 0.0 < self.transfer_ratio < 1.0:
            raise ValueError("transfer_ratio must lie in (0, 1)")
        if self.reserve_factor <= 1.0:
            raise ValueError("reserve_factor must exceed 1")

    def capacity(self, battery_weight: float) -> float:
        """Nominal full-charge capacity (J) of a battery of the given weight."""
        return self.energy_density * battery_weight

    def usable_energy(self, battery_weight: float) -> float:
        """Energy (J) a full battery may actually spend before the floor."""
        return self.depth_of_discharge * self.capacity(battery_weight) / self.reserve_factor


@dataclass(frozen=True)
class UavParams:
    """Airframe weights, the allowed speed set, and component models.

    speeds must contain 0, at least one positive entry, and ascend strictly.
    """

    body_weight: float
    battery_weight: float
    payload_weight: float
    speeds: tuple[float, ...]
    power: PowerParams
    battery: BatteryParams

    def __post_init__(self) -> None:
        if self.body_weight <= 0 or self.battery_weight <= 0:
            raise ValueError("body_weight and battery_weight must be positive")
        if self.payload_weight < 0:
            raise ValueError("payload_weight must be nonnegative")
        speeds = tuple(float(v) for v in self.speeds)
        object.__setattr__(self, "speeds", speeds)
        if not speeds or speeds[0] != 0.0:
            raise ValueError("speeds must start with 0")
        if len(speeds) < 2:
            raise ValueError("speeds must contain at least one positive value")
        if any(b <= a for a, b in zip(speeds, speeds[1:])):
            raise ValueError("speeds must be strictly ascending")

    @property
    def total_weight(self) -> float:
        return self.body_weight + self.battery_weight + self.payload_weight

    @property
    def top_speed(self) -> float:
        return self.speeds[-1]

    def with_payload(self, payload_weight: float) -> "UavParams":
        """Copy with a different payload weight (battery and body unchanged)."""
        return UavParams(
            body_weight=self.body_weight,
            battery_weight=self.battery_weight,
            payload_weight=payload_weight,
            speeds=self.speeds,
            power=self.power,
            battery=self.battery,
        )


@dataclass(frozen=True)
class CommParams:
    """Air-to-ground link parameters used to derive the coverage radius.

    altitude: UAV flight altitude (m); bs_height: antenna height (m)
    sinr_threshold: hard threshold (dB) for a usable link
    snr_ref: SNR at 1 m free-space reference distance (dB)
    mu1, mu2: sigmoid parameters of the line-of-sight probability
              (elevation angle in degrees)
    excess_los / excess_nlos: excess pathloss (dB) for LoS / NLoS links
    """

    altitude: float
    bs_height: float
    sinr_threshold: float
    snr_ref: float
    mu1: float
    mu2: float
    excess_los: float
    excess_nlos: float

    def __post_init__(self) -> None:
        if not self.altitude > self.bs_height >= 0:
            raise ValueError("require altitude > bs_height >= 0")
        if not self.excess_nlos > self.excess_los >= 0:
            raise ValueError("require excess_nlos > excess_los >= 0")
        if self.mu1 <= 0 or self.mu2 <= 0:
            raise ValueError("mu1 and mu2 must be positive")


def propulsion_power(v: float, w: float, p: PowerParams) -> float:
    """Propulsion power (W) at horizontal speed v (m/s) and total weight w (kg).

    Sum of blade-profile, induced, and fuselage-parasite terms. Continuous and
    finite for all v >= 0; at v = 0 it reduces to hover profile plus induced
    power exactly.
    """
    if not math.isfinite(v) or not math.isfinite(w):
        raise ValueError("speed and weight must be finite")
    if v < 0:
        raise ValueError(f"speed must be nonnegative, got {v!r}")
    if w <= 0:
        raise ValueError(f"total weight must be positive, got {w!r}")
    profile = p.profile_power * (1.0 + 3.0 * (v / p.tip_speed) ** 2)
    ratio_sq = (v / p.hover_induced_speed(w)) ** 2
    induced = p.induced_power(w) * math.sqrt(
        math.sqrt(1.0 + 0.25 * ratio_sq * ratio_sq) - 0.5 * ratio_sq
    )
    parasite = 0.5 * p.flat_plate_area * p.air_density * v ** 3
    return profile + induced + parasite


def max_flight_distance(v: float, w: float, w2: float, uav: UavParams) -> float:
    """Longest distance (m) coverable at constant speed v on one battery.

    The usable energy of a battery of weight w2 is drawn at rate P(v)/eta;
    the result is the flight time multiplied by v. Zero speed covers zero
    distance.
    """
    if v == 0:
        return 0.0
    budget = uav.battery.usable_energy(w2)
    drain = propulsion_power(v, w, uav.power) / uav.battery.transfer_ratio
    return v * budget / drain


def energy_per_distance(v: float, w: float, uav: UavParams) -> float:
    """Battery energy (J) drawn per meter of travel at constant speed v > 0."""
    if v <= 0:
        raise ValueError("energy per distance requires a positive speed")
    return propulsion_power(v, w, uav.power) / (uav.battery.transfer_ratio * v)


def energy_optimal_speed(uav: UavParams, w: float | None = None) -> float:
    """Speed in the allowed set minimizing energy drawn per unit distance.

    This same speed maximizes the battery-limited range. Ties resolve to the
    fastest minimizer so mission time never suffers for equal energy.
    """
    if w is None:
        w = uav.total_weight
    best_v = 0.0
    best_e = math.inf
    for v in uav.speeds:
        if v == 0:
            continue
        e = energy_per_distance(v, w, uav)
        if e < best_e or (e == best_e and v > best_v):
            best_e = e
            best_v = v
    return best_v


def los_probability(theta: float, c: CommParams) -> float:
    """Line-of-sight probability at elevation angle theta (degrees, 0..90).

    Strictly increasing in theta; equals 1/(1 + mu1) at theta = mu1.
    """
    if not 0.0 <= theta <= 90.0:
        raise ValueError(f"elevation angle must lie in [0, 90] degrees, got {theta!r}")
    return 1.0 / (1.0 + c.mu1 * math.exp(-c.mu2 * (theta - c.mu1)))


def expected_snr(horizontal_distance: float, c: CommParams) -> float:
    """Expected SNR (dB) at the given horizontal distance from a lone antenna.

    Free-space loss over the 3D distance plus the LoS-probability-weighted
    excess pathloss. Strictly decreasing in the horizontal distance.
    """
    r = horizontal_distance
    if r < 0:
        raise ValueError(f"horizontal distance must be nonnegative, got {r!r}")
    dz = c.altitude - c.bs_height
    d3 = math.hypot(r, dz)
    theta = 90.0 if r == 0 else math.degrees(math.atan(dz / r))
    p = los_probability(theta, c)
    excess = p * c.excess_los + (1.0 - p) * c.excess_nlos
    return c.snr_ref - 20.0 * math.log10(d3) - excess


_RADIUS_BRACKET = 1.0e6  # m; beyond any realistic cell
_RADIUS_TOL = 1.0e-3  # m
_RADIUS_MAX_ITER = 200


def base_coverage_radius(c: CommParams) -> float:
    """Horizontal distance (m) at which the expected SNR meets the threshold.

    Found by bisection on [0, 1e6] m to 1e-3 m. Monotonicity of the SNR in
    distance makes the crossing unique. Raises NoCoverageError when even the
    point directly under the UAV fails the threshold.
    """
    if expected_snr(0.0, c) < c.sinr_threshold:
        raise NoCoverageError(
            "SINR threshold cannot be met even at zero horizontal distance"
        )
    lo, hi = 0.0, _RADIUS_BRACKET
    if expected_snr(hi, c) >= c.sinr_threshold:
        return hi
    for _ in range(_RADIUS_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if expected_snr(mid, c) >= c.sinr_threshold:
            lo = mid
        else:
            hi = mid
        if hi - lo <= _RADIUS_TOL:
            break
    return 0.5 * (lo + hi)


# Reference configuration for the bundled quadcopter and suburban cell.

def default_power_params() -> PowerParams:
    return PowerParams(
        delta_p=0.012,
        n_rotors=4,
        n_blades=4,
        chord=0.0157,
        rotor_radius=0.07,
        tip_speed=14.0,
        correction_factor=0.1,
        flat_plate_area=0.03,
        air_density=1.225,
        gravity=9.807,
    )


def default_battery_params() -> BatteryParams:
    return BatteryParams(
        energy_density=540e3,
        depth_of_discharge=0.7,
        transfer_ratio=0.7,
        reserve_factor=1.2,
    )


def default_uav_params(payload_weight: float = 1.0) -> UavParams:
    """Reference 2.97 kg quadcopter (at 1 kg payload) with 0..30 m/s speeds."""
    return UavParams(
        body_weight=1.07,
        battery_weight=0.9,
        payload_weight=payload_weight,
        speeds=tuple(float(v) for v in range(31)),
        power=default_power_params(),
        battery=default_battery_params(),
    )


def default_comm_params() -> CommParams:
    """Suburban macro-cell link budget; yields a coverage radius near 1484.6 m."""
    return CommParams(
        altitude=100.0,
        bs_height=35.0,
        sinr_threshold=12.0,
        snr_ref=95.0,
        mu1=4.880,
        mu2=0.429,
        excess_los=0.1,
        excess_nlos=21.0,
    )
