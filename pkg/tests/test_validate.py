"""Trajectory-validator and lattice-oracle tests.

The validator is checked on planner outputs (must pass), on hand-corrupted
trajectories (must fail on the right constraint), and its closed-form battery
account against a fine-step integrator. The oracle is checked for its
upper-bound and nested-refinement guarantees.
"""

from __future__ import annotations

import math

import pytest

from cellnav.mapgen import generate_map
from cellnav.model import default_uav_params, propulsion_power
from cellnav.planner import FlightLeg, SwapEvent, Trajectory
from cellnav.planner_battery import plan_min_energy, plan_min_time
from cellnav.validate import grid_oracle_plan, validate_trajectory
from conftest import make_map, rng_for


def single_disk_net(u0=(-40.0, 0.0), uF=(40.0, 0.0)):
    return make_map(60.0, [(0, 0)], u0=u0, uF=uF)


def leg_energy(leg, uav):
    power = propulsion_power(leg.speed, uav.total_weight, uav.power)
    return leg.time * power / uav.battery.transfer_ratio


class TestValidator:
    def test_planner_outputs_pass(self, golden_uav):
        for seed in (41, 42, 43):
            net = generate_map(seed, 6, 2, 9000.0, golden_uav)
            for planner in (plan_min_time, plan_min_energy):
                result = planner(net, golden_uav)
                report = validate_trajectory(net, golden_uav, result.trajectory)
                assert report.passed
                assert report.min_battery_margin >= 0.0
                assert report.worst_connectivity_margin >= -1e-6

    def test_leg_outside_coverage_is_flagged(self, golden_uav):
        net = single_disk_net()
        bad = Trajectory(
            items=(
                FlightLeg((-40.0, 0.0), (0.0, 80.0), 20.0),  # exits the disk
                FlightLeg((0.0, 80.0), (40.0, 0.0), 20.0),
            )
        )
        report = validate_trajectory(net, golden_uav, bad)
        assert not report.passed
        assert not report.check("connectivity").passed
        assert "leg 0" in report.check("connectivity").detail
        assert report.worst_connectivity_margin < 0

    def test_energy_overdraw_by_one_joule_fails(self, golden_uav):
        # A stretch engineered to exceed the budget by about one joule.
        budget = golden_uav.battery.usable_energy(golden_uav.battery_weight)
        v = 20.0
        rate = propulsion_power(v, golden_uav.total_weight, golden_uav.power) / (
            golden_uav.battery.transfer_ratio
        )
        overdraw_time = (budget + 1.0) / rate
        length = v * overdraw_time
        net = make_map(length, [(0, 0)], u0=(-length / 2, 0), uF=(length / 2, 0))
        bad = Trajectory(
            items=(FlightLeg((-length / 2, 0.0), (length / 2, 0.0), v),)
        )
        report = validate_trajectory(net, golden_uav, bad)
        assert not report.passed
        assert not report.check("battery").passed
        assert report.min_battery_margin == pytest.approx(-1.0, abs=1e-6)
        # Shaving the overdraw off restores a pass.
        good_length = v * (budget - 1.0) / rate
        net2 = make_map(length, [(0, 0)], u0=(-good_length / 2, 0), uF=(good_length / 2, 0))
        good = Trajectory(
            items=(FlightLeg((-good_length / 2, 0.0), (good_length / 2, 0.0), v),)
        )
        assert validate_trajectory(net2, golden_uav, good).passed

    def test_speed_outside_set_is_flagged(self, golden_uav):
        net = single_disk_net()
        bad = Trajectory(items=(FlightLeg((-40.0, 0.0), (40.0, 0.0), 17.25),))
        report = validate_trajectory(net, golden_uav, bad)
        assert not report.check("speeds").passed

    def test_endpoints_and_continuity_flagged(self, golden_uav):
        net = single_disk_net()
        wrong_end = Trajectory(items=(FlightLeg((-40.0, 0.0), (10.0, 0.0), 20.0),))
        assert not validate_trajectory(net, golden_uav, wrong_end).check("endpoints").passed
        torn = Trajectory(
            items=(
                FlightLeg((-40.0, 0.0), (0.0, 0.0), 20.0),
                FlightLeg((5.0, 0.0), (40.0, 0.0), 20.0),
            )
        )
        assert not validate_trajectory(net, golden_uav, torn).check("continuity").passed

    def test_swap_checks(self, golden_uav):
        net = make_map(
            60.0, [(0, 0)], charging=[(0, 0, 45.0)], u0=(-40, 0), uF=(40, 0)
        )
        mid = (0.0, 0.0)
        ok = Trajectory(
            items=(
                FlightLeg(net.u0, mid, 20.0),
                SwapEvent(station=0, dwell=45.0),
                FlightLeg(mid, net.uF, 20.0),
            )
        )
        assert validate_trajectory(net, golden_uav, ok).passed
        wrong_dwell = Trajectory(
            items=(
                FlightLeg(net.u0, mid, 20.0),
                SwapEvent(station=0, dwell=30.0),
                FlightLeg(mid, net.uF, 20.0),
            )
        )
        assert not validate_trajectory(net, golden_uav, wrong_dwell).check("swaps").passed
        wrong_place = Trajectory(
            items=(
                FlightLeg(net.u0, (-10.0, 0.0), 20.0),
                SwapEvent(station=0, dwell=45.0),
                FlightLeg((-10.0, 0.0), net.uF, 20.0),
            )
        )
        assert not validate_trajectory(net, golden_uav, wrong_place).check("swaps").passed
        unknown = Trajectory(
            items=(
                FlightLeg(net.u0, mid, 20.0),
                SwapEvent(station=7, dwell=45.0),
                FlightLeg(mid, net.uF, 20.0),
            )
        )
        assert not validate_trajectory(net, golden_uav, unknown).check("swaps").passed

    def test_battery_account_matches_fine_integrator(self, golden_uav):
        # Closed-form per-leg energy vs explicit 0.01 s Euler stepping.
        rng = rng_for("battery integrator")
        speeds = [v for v in golden_uav.speeds if v > 0]
        for _ in range(100):
            legs = []
            x = 0.0
            for _ in range(rng.randint(1, 4)):
                v = rng.choice(speeds)
                length = rng.uniform(10.0, 400.0)
                legs.append(FlightLeg((x, 0.0), (x + length, 0.0), v))
                x += length
            closed = math.fsum(leg_energy(leg, golden_uav) for leg in legs)
            dt = 0.01
            stepped = 0.0
            for leg in legs:
                rate = propulsion_power(
                    leg.speed, golden_uav.total_weight, golden_uav.power
                ) / golden_uav.battery.transfer_ratio
                duration = leg.time
                n_full = int(duration / dt)
                stepped += rate * dt * n_full + rate * (duration - n_full * dt)
            assert stepped == pytest.approx(closed, rel=1e-6)

    def test_empty_trajectory_requires_coincident_terminals(self, golden_uav):
        same = make_map(10.0, [(0, 0)], u0=(1, 1), uF=(1, 1))
        report = validate_trajectory(same, golden_uav, Trajectory(items=()))
        assert report.passed
        apart = single_disk_net()
        report = validate_trajectory(apart, golden_uav, Trajectory(items=()))
        assert not report.passed


class TestGridOracle:
    def test_direct_route_is_exact(self, golden_uav):
        net = single_disk_net()
        oracle = grid_oracle_plan(net, golden_uav, 1.0, "time", battery=False)
        assert oracle.feasible
        # The direct covered segment is a candidate, so no lattice detour.
        assert oracle.objective == pytest.approx(80.0 / 30.0, rel=1e-12)
        assert oracle.objective <= (80.0 + 2 * 1.0 * math.sqrt(2)) / 30.0

    def test_refinement_is_monotone_on_nested_grids(self, golden_uav):
        # Two-disk detour map: the route must bend near a boundary crossing.
        net = make_map(5.0, [(0, 0), (9, 0)], u0=(-4, 2.5), uF=(13, 2.5))
        lengths = []
        for step in (0.8, 0.4, 0.2):
            oracle = grid_oracle_plan(
                net, golden_uav, step, "time", battery=False, link_radius=3 * 0.8
            )
            assert oracle.feasible
            lengths.append(oracle.trajectory.total_distance)
        assert lengths[1] <= lengths[0] + 1e-9
        assert lengths[2] <= lengths[1] + 1e-9

    def test_never_beats_planner_and_converges(self, golden_uav):
        net = make_map(5.0, [(0, 0), (9, 0)], u0=(-4, 2.5), uF=(13, 2.5))
        from cellnav.planner import plan_unlimited

        exact = plan_unlimited(net, golden_uav.top_speed)
        for step in (0.4, 0.1):
            oracle = grid_oracle_plan(net, golden_uav, step, "time", battery=False)
            assert oracle.objective >= exact.objective - 1e-9
        close = grid_oracle_plan(net, golden_uav, 0.05, "time", battery=False)
        assert close.objective <= exact.objective * 1.01

    def test_two_level_oracle_with_forced_swap(self, golden_uav):
        net = make_map(
            6000.0, [(0, 0), (9000, 0)],
            charging=[(4500, 0, 100.0)], u0=(-5000, 0), uF=(14000, 0),
        )
        exact = plan_min_time(net, golden_uav)
        oracle = grid_oracle_plan(net, golden_uav, 8.0, "time", battery=True)
        assert oracle.feasible
        assert len(oracle.trajectory.swaps) == 1
        assert oracle.objective >= exact.objective - 1e-9
        assert oracle.objective <= exact.objective * 1.01
        # Energy mode obeys the same ordering.
        exact_e = plan_min_energy(net, golden_uav)
        oracle_e = grid_oracle_plan(net, golden_uav, 8.0, "energy", battery=True)
        assert oracle_e.objective >= exact_e.objective - 1e-9

    def test_spurious_infeasibility_only(self, golden_uav):
        # A corridor thinner than the step may defeat the lattice, but a
        # feasible oracle answer implies a feasible instance.
        net = make_map(6.0, [(0, 0), (9, 0, 1.0)], u0=(-3, 0), uF=(12, 0))
        fine = grid_oracle_plan(net, golden_uav, 0.2, "time", battery=False)
        assert fine.feasible
        for leg in fine.trajectory.legs:
            from cellnav.geometry import segment_covered

            assert segment_covered(leg.start, leg.end, net)

    def test_rejects_bad_arguments(self, golden_uav):
        net = single_disk_net()
        with pytest.raises(ValueError):
            grid_oracle_plan(net, golden_uav, 0.0, "time")
        with pytest.raises(ValueError):
            grid_oracle_plan(net, golden_uav, 1.0, "fuel")
