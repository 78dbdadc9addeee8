import math

import numpy as np
import pytest

from diffdrive_ekf.kinematics import (
    BodyVelocity,
    Displacement,
    Pose,
    RobotGeometry,
    WheelAngularSpeeds,
    dead_reckon_step,
    increments_to_displacement,
    pose_rate,
    wheel_increments,
    wheels_to_body,
    wrap_angle,
)

GEOM = RobotGeometry(wheel_radius=0.05, track_width=0.6)


class TestWrapAngle:
    @pytest.mark.parametrize(
        "angle,expected",
        [
            (0.0, 0.0),
            (3.0 * math.pi, math.pi),
            (-math.pi, math.pi),
            (math.pi, math.pi),
            (7.0, 7.0 - 2.0 * math.pi),
            (-7.0, 2.0 * math.pi - 7.0),
        ],
    )
    def test_examples(self, angle, expected):
        assert wrap_angle(angle) == pytest.approx(expected, abs=1e-15)

    @pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
    def test_rejects_nonfinite(self, bad):
        with pytest.raises(ValueError):
            wrap_angle(bad)

    def test_idempotent_and_in_range(self):
        rng = np.random.default_rng(0)
        for angle in rng.uniform(-50.0, 50.0, size=1000):
            wrapped = wrap_angle(angle)
            assert -math.pi < wrapped <= math.pi
            assert wrap_angle(wrapped) == wrapped
            # congruent modulo 2*pi
            turns = (angle - wrapped) / (2.0 * math.pi)
            assert abs(turns - round(turns)) < 1e-9


class TestTypes:
    def test_pose_wraps_heading(self):
        assert Pose(0.0, 0.0, 3.0 * math.pi).theta == pytest.approx(math.pi)
        assert Pose(1.0, 2.0, -math.pi).theta == math.pi

    def test_pose_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            Pose(math.nan, 0.0, 0.0)
        with pytest.raises(ValueError):
            Pose(0.0, 0.0, math.inf)

    @pytest.mark.parametrize("radius,track", [(0.0, 0.6), (-0.05, 0.6), (0.05, 0.0), (0.05, -1.0)])
    def test_geometry_rejects_nonpositive(self, radius, track):
        with pytest.raises(ValueError):
            RobotGeometry(wheel_radius=radius, track_width=track)

    def test_wheel_speeds_reject_nonfinite(self):
        with pytest.raises(ValueError):
            WheelAngularSpeeds(math.nan, 0.0)


class TestWheelsToBody:
    def test_symmetric_straight(self):
        b = wheels_to_body(0.3, 0.3, GEOM)
        assert b.v == pytest.approx(0.3)
        assert b.omega == 0.0

    def test_turning(self):
        b = wheels_to_body(0.3, 0.05, GEOM)
        assert b.v == pytest.approx(0.175)
        assert b.omega == pytest.approx(0.25 / 0.6)

    def test_spin_in_place(self):
        b = wheels_to_body(0.1, -0.1, GEOM)
        assert b.v == 0.0
        assert b.omega == pytest.approx(0.2 / 0.6)


class TestPoseRate:
    @pytest.mark.parametrize(
        "theta,v,omega,expected",
        [
            (0.0, 1.0, 0.0, (1.0, 0.0, 0.0)),
            (math.pi / 2, 1.0, 0.0, (0.0, 1.0, 0.0)),
            (math.pi / 4, 0.3, 0.2, (0.3 * math.cos(math.pi / 4), 0.3 * math.sin(math.pi / 4), 0.2)),
        ],
    )
    def test_examples(self, theta, v, omega, expected):
        rate = pose_rate(Pose(0.0, 0.0, theta), BodyVelocity(v, omega))
        assert rate == pytest.approx(expected, abs=1e-12)


class TestWheelIncrements:
    def test_example(self):
        ds_l, ds_r = wheel_increments(WheelAngularSpeeds(6.0, 6.0), 0.1, GEOM)
        assert ds_l == pytest.approx(0.03)
        assert ds_r == pytest.approx(0.03)

    def test_rest(self):
        assert wheel_increments(WheelAngularSpeeds(0.0, 0.0), 0.1, GEOM) == (0.0, 0.0)

    def test_reverse(self):
        ds_l, ds_r = wheel_increments(WheelAngularSpeeds(-6.0, -6.0), 0.1, GEOM)
        assert ds_r == pytest.approx(-0.03)

    @pytest.mark.parametrize("dt", [0.0, -0.1, math.nan])
    def test_rejects_bad_dt(self, dt):
        with pytest.raises(ValueError):
            wheel_increments(WheelAngularSpeeds(1.0, 1.0), dt, GEOM)


class TestDisplacement:
    def test_straight(self):
        d = increments_to_displacement(0.03, 0.03, GEOM)
        assert d.ds == pytest.approx(0.03)
        assert d.dtheta == 0.0

    def test_turning(self):
        d = increments_to_displacement(0.005, 0.03, GEOM)
        assert d.ds == pytest.approx(0.0175)
        assert d.dtheta == pytest.approx(0.025 / 0.6)

    def test_pure_rotation(self):
        d = increments_to_displacement(-0.01, 0.01, GEOM)
        assert d.ds == 0.0


class TestDeadReckonStep:
    def test_straight_along_x(self):
        p = dead_reckon_step(Pose(0.0, 0.0, 0.0), Displacement(0.03, 0.03, 0.03, 0.0))
        assert (p.x, p.y, p.theta) == pytest.approx((0.03, 0.0, 0.0))

    def test_spin_in_place(self):
        p = dead_reckon_step(Pose(0.0, 0.0, 0.0), Displacement(0.0, 0.0, 0.0, math.pi / 2))
        assert (p.x, p.y, p.theta) == pytest.approx((0.0, 0.0, math.pi / 2))

    def test_midpoint_heading(self):
        p = dead_reckon_step(Pose(0.0, 0.0, 0.0), Displacement(0.0, 0.0, 0.03, 0.1))
        assert p.x == pytest.approx(0.03 * math.cos(0.05), abs=1e-12)
        assert p.y == pytest.approx(0.03 * math.sin(0.05), abs=1e-12)
        assert p.theta == pytest.approx(0.1)

    def test_zero_rotation_moves_along_heading(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            start = Pose(rng.normal(), rng.normal(), rng.uniform(-math.pi, math.pi))
            ds = rng.uniform(-0.1, 0.1)
            p = dead_reckon_step(start, Displacement(ds, ds, ds, 0.0))
            assert p.x - start.x == pytest.approx(ds * math.cos(start.theta), abs=1e-15)
            assert p.y - start.y == pytest.approx(ds * math.sin(start.theta), abs=1e-15)
            assert p.theta == start.theta


class TestProperties:
    def test_body_velocity_consistent_with_increments(self):
        # constant speeds: ds == v*dt and dtheta == omega*dt
        rng = np.random.default_rng(2)
        dt = 0.1
        for _ in range(100):
            v_r, v_l = rng.uniform(-0.3, 0.3, size=2)
            body = wheels_to_body(v_r, v_l, GEOM)
            speeds = WheelAngularSpeeds(v_r / GEOM.wheel_radius, v_l / GEOM.wheel_radius)
            d = increments_to_displacement(*wheel_increments(speeds, dt, GEOM), GEOM)
            assert d.ds == pytest.approx(body.v * dt, abs=1e-15)
            assert d.dtheta == pytest.approx(body.omega * dt, abs=1e-15)

    def test_rotation_equivariance(self):
        # rotating the start pose rotates the step's displacement vector
        rng = np.random.default_rng(3)
        for _ in range(100):
            start = Pose(rng.normal(), rng.normal(), rng.uniform(-math.pi, math.pi))
            d = Displacement(0.0, 0.0, rng.uniform(-0.1, 0.1), rng.uniform(-0.3, 0.3))
            phi = rng.uniform(-math.pi, math.pi)
            plain = dead_reckon_step(start, d)
            rotated = dead_reckon_step(Pose(start.x, start.y, start.theta + phi), d)
            dx, dy = plain.x - start.x, plain.y - start.y
            expected = (
                dx * math.cos(phi) - dy * math.sin(phi),
                dx * math.sin(phi) + dy * math.cos(phi),
            )
            assert (rotated.x - start.x, rotated.y - start.y) == pytest.approx(expected, abs=1e-12)
            assert wrap_angle(rotated.theta - plain.theta - phi) == pytest.approx(0.0, abs=1e-12)

    def test_midpoint_step_is_second_order(self):
        # halving the step size cuts the endpoint gap to the exact arc ~4x
        v, omega, total_time = 0.3, 0.5, 2.0
        exact = (
            (v / omega) * math.sin(omega * total_time),
            -(v / omega) * (math.cos(omega * total_time) - 1.0),
        )

        def endpoint_gap(n_steps: int) -> float:
            dt = total_time / n_steps
            pose = Pose(0.0, 0.0, 0.0)
            d = Displacement(0.0, 0.0, v * dt, omega * dt)
            for _ in range(n_steps):
                pose = dead_reckon_step(pose, d)
            return math.hypot(pose.x - exact[0], pose.y - exact[1])

        ratio = endpoint_gap(50) / endpoint_gap(100)
        assert 3.5 < ratio < 4.5
