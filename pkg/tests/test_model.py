"""Propulsion, battery-range, and coverage-radius model tests.

Covers the hover identity, high-precision values of the derived power
coefficients, convexity of the power curve on the cruise band, monotonicity
of the link model, and the coverage-radius bisection anchors.
"""

from __future__ import annotations

import math

import pytest

from cellnav.model import (
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

W_TOTAL = 2.97


def test_hover_power_is_profile_plus_induced(golden_uav):
    p = golden_uav.power
    hover = propulsion_power(0.0, W_TOTAL, p)
    assert hover == p.profile_power + p.induced_power(W_TOTAL)


def test_profile_power_and_induced_speed_values(golden_uav):
    # High-precision evaluation of the closed-form coefficients.
    p = golden_uav.power
    assert p.profile_power == pytest.approx(0.0886602864, rel=1e-9)
    assert p.hover_induced_speed(W_TOTAL) == pytest.approx(13.8950558939, rel=1e-9)
    assert p.induced_power(W_TOTAL) == pytest.approx(445.190212568, rel=1e-9)


def test_power_convex_on_cruise_band(golden_uav):
    # Second differences on a 0.01 m/s grid over [15, 30] m/s.
    p = golden_uav.power
    h = 0.01
    grid = [15.0 + i * h for i in range(int(15.0 / h) + 1)]
    worst = min(
        propulsion_power(v + h, W_TOTAL, p)
        - 2.0 * propulsion_power(v, W_TOTAL, p)
        + propulsion_power(v - h, W_TOTAL, p)
        for v in grid[1:-1]
    )
    assert worst >= 0.0


def test_power_rejects_bad_inputs(golden_uav):
    p = golden_uav.power
    with pytest.raises(ValueError):
        propulsion_power(-1.0, W_TOTAL, p)
    with pytest.raises(ValueError):
        propulsion_power(math.nan, W_TOTAL, p)
    with pytest.raises(ValueError):
        propulsion_power(10.0, 0.0, p)
    with pytest.raises(ValueError):
        propulsion_power(10.0, math.inf, p)


def test_power_continuous_near_zero(golden_uav):
    p = golden_uav.power
    hover = propulsion_power(0.0, W_TOTAL, p)
    assert propulsion_power(1e-9, W_TOTAL, p) == pytest.approx(hover, rel=1e-6)
    for v in range(0, 31):
        assert math.isfinite(propulsion_power(float(v), W_TOTAL, p))


def test_battery_capacity_and_budget(golden_uav):
    b = golden_uav.battery
    assert b.capacity(0.9) == pytest.approx(486_000.0)
    assert b.usable_energy(0.9) == pytest.approx(283_500.0)  # 0.7 * 486000 / 1.2


def test_zero_speed_flies_nowhere(golden_uav):
    assert max_flight_distance(0.0, W_TOTAL, 0.9, golden_uav) == 0.0


def test_range_argmax_matches_power_per_speed_argmin(golden_uav):
    # range(v) is proportional to v / P(v), so maximizing range is exactly
    # minimizing P(v) / v over the positive speed set.
    speeds = [float(v) for v in range(1, 31)]
    by_range = max(
        speeds, key=lambda v: max_flight_distance(v, W_TOTAL, 0.9, golden_uav)
    )
    by_ratio = min(
        speeds, key=lambda v: propulsion_power(v, W_TOTAL, golden_uav.power) / v
    )
    assert by_range == by_ratio
    assert by_range == energy_optimal_speed(golden_uav)


def test_los_probability_anchor_points(golden_comm):
    assert los_probability(golden_comm.mu1, golden_comm) == pytest.approx(
        1.0 / (1.0 + 4.880), rel=1e-12
    )
    assert los_probability(90.0, golden_comm) > 0.999999
    # Elevation of a 65 m height difference seen from 1484.6 m away.
    assert los_probability(2.507, golden_comm) == pytest.approx(0.0689, abs=5e-4)


def test_los_probability_strictly_increasing(golden_comm):
    # Strict growth until the sigmoid saturates at double precision, and
    # never a decrease anywhere on a 10^4-point grid.
    prev = -1.0
    for i in range(10_001):
        theta = 90.0 * i / 10_000
        value = los_probability(theta, golden_comm)
        assert value >= prev
        if 1.0 - value > 1e-12:
            assert value > prev
        prev = value
    with pytest.raises(ValueError):
        los_probability(-0.1, golden_comm)
    with pytest.raises(ValueError):
        los_probability(90.1, golden_comm)


def test_expected_snr_threshold_at_coverage_edge(golden_comm):
    assert expected_snr(1484.6, golden_comm) == pytest.approx(12.0, abs=0.05)


def test_expected_snr_pure_fspl_when_no_excess_loss():
    c = CommParams(
        altitude=100.0, bs_height=35.0, sinr_threshold=12.0, snr_ref=95.0,
        mu1=4.880, mu2=0.429, excess_los=1e-12, excess_nlos=2e-12,
    )
    r = 250.0
    d3 = math.hypot(r, 65.0)
    assert expected_snr(r, c) == pytest.approx(95.0 - 20.0 * math.log10(d3), abs=1e-9)


def test_expected_snr_strictly_decreasing(golden_comm):
    prev = math.inf
    for i in range(10_001):
        r = 3000.0 * i / 10_000
        value = expected_snr(r, golden_comm)
        assert value < prev
        prev = value
    assert expected_snr(100.0, golden_comm) > expected_snr(200.0, golden_comm)


def test_base_coverage_radius_reference_config(golden_comm):
    d0 = base_coverage_radius(golden_comm)
    assert d0 == pytest.approx(1484.6, abs=0.5)
    # The defining equation holds at the returned radius.
    assert expected_snr(d0, golden_comm) == pytest.approx(
        golden_comm.sinr_threshold, abs=0.01
    )


def test_base_coverage_radius_closed_form_check():
    # Without excess losses the radius solves a pure free-space budget.
    c = CommParams(
        altitude=100.0, bs_height=35.0, sinr_threshold=12.0, snr_ref=95.0,
        mu1=4.880, mu2=0.429, excess_los=1e-15, excess_nlos=2e-15,
    )
    d3 = 10.0 ** ((95.0 - 12.0) / 20.0)
    expected = math.sqrt(d3 * d3 - 65.0 * 65.0)
    assert base_coverage_radius(c) == pytest.approx(expected, abs=0.01)


def test_base_coverage_radius_degenerate_and_no_coverage():
    tight = CommParams(
        altitude=1.0 + 1e-9, bs_height=1e-9, sinr_threshold=94.9, snr_ref=95.0,
        mu1=4.880, mu2=0.429, excess_los=1e-13, excess_nlos=2e-13,
    )
    # Threshold met essentially only under the antenna.
    assert base_coverage_radius(tight) < 1.0
    impossible = CommParams(
        altitude=100.0, bs_height=35.0, sinr_threshold=80.0, snr_ref=95.0,
        mu1=4.880, mu2=0.429, excess_los=0.1, excess_nlos=21.0,
    )
    with pytest.raises(NoCoverageError):
        base_coverage_radius(impossible)


def test_param_validation():
    power = default_uav_params().power
    battery = default_uav_params().battery
    with pytest.raises(ValueError):
        PowerParams(
            delta_p=-0.01, n_rotors=4, n_blades=4, chord=0.0157, rotor_radius=0.07,
            tip_speed=14.0, correction_factor=0.1, flat_plate_area=0.03,
            air_density=1.225, gravity=9.807,
        )
    with pytest.raises(ValueError):
        BatteryParams(energy_density=540e3, depth_of_discharge=1.2,
                      transfer_ratio=0.7, reserve_factor=1.2)
    with pytest.raises(ValueError):
        BatteryParams(energy_density=540e3, depth_of_discharge=0.7,
                      transfer_ratio=0.7, reserve_factor=0.9)
    with pytest.raises(ValueError):
        UavParams(body_weight=1.0, battery_weight=0.9, payload_weight=0.0,
                  speeds=(0.0, 5.0, 5.0), power=power, battery=battery)
    with pytest.raises(ValueError):
        UavParams(body_weight=1.0, battery_weight=0.9, payload_weight=0.0,
                  speeds=(1.0, 5.0), power=power, battery=battery)
    with pytest.raises(ValueError):
        CommParams(altitude=30.0, bs_height=35.0, sinr_threshold=12.0, snr_ref=95.0,
                   mu1=4.88, mu2=0.429, excess_los=0.1, excess_nlos=21.0)
