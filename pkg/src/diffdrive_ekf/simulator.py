"""Deterministic ground-truth and sensor simulator for a differential-drive robot.

Ground truth follows exact constant-curvature arcs, integrated at a fine time
step; sensors (quadrature wheel encoders, magnetic compass) are sampled on a
coarser fixed period. Actuation noise combines multiplicative motor-speed
ripple with additive slip whose variance grows with the commanded speed, so a
zero command always stays zero. Every random draw comes from one seeded
generator owned by the simulation instance.
"""

import math
from dataclasses import dataclass

import numpy as np

from .kinematics import (
    TAU,
    Pose,
    RobotGeometry,
    dead_reckon_step,
    increments_to_displacement,
    wrap_angle,
)

# below this |omega| the true motion is integrated as a straight line
OMEGA_STRAIGHT_EPS = 1e-12

MAX_RIM_SPEED = 0.3  # m/s, the drive's commanded-speed ceiling


@dataclass(frozen=True)
class SimParams:
    """Sampling, encoder, compass, and actuation-noise parameters.

    ``dt_fine`` must divide ``dt_sensor``; ground truth is integrated at the
    fine step while sensors are sampled every ``dt_sensor`` seconds.
    """

    dt_sensor: float = 0.1
    dt_fine: float = 0.001
    encoder_cpr: int = 500
    quad_decode_factor: int = 4
    compass_sigma: float = math.radians(0.1)
    compass_quantum: float = math.radians(0.1)
    speed_ripple_frac: float = 0.05
    slip_delta: float = 0.01
    seed: int = 0

    def __post_init__(self) -> None:
        if not (self.dt_sensor > 0.0 and self.dt_fine > 0.0):
            raise ValueError("dt_sensor and dt_fine must be > 0")
        ratio = self.dt_sensor / self.dt_fine
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio) or round(ratio) < 1:
            raise ValueError(
                f"dt_fine must divide dt_sensor, got {self.dt_fine} vs {self.dt_sensor}"
            )
        if self.encoder_cpr < 1 or self.quad_decode_factor < 1:
            raise ValueError("encoder_cpr and quad_decode_factor must be >= 1")
        for name in ("compass_sigma", "compass_quantum", "speed_ripple_frac", "slip_delta"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0")

    @property
    def counts_per_rev(self) -> int:
        return self.encoder_cpr * self.quad_decode_factor

    @property
    def substeps_per_sample(self) -> int:
        return round(self.dt_sensor / self.dt_fine)


@dataclass(frozen=True)
class EncoderSample:
    """Cumulative signed quadrature counts per wheel at a sample time."""

    ticks_l: int
    ticks_r: int
    timestamp: float


@dataclass(frozen=True)
class CompassSample:
    """Quantized heading observation (radians, wrapped to (-pi, pi])."""

    heading: float
    timestamp: float


def integrate_truth(p: Pose, v_r: float, v_l: float, dt: float, geom: RobotGeometry) -> Pose:
    """Advance the true pose along an exact constant-curvature arc."""
    if not dt > 0.0:
        raise ValueError(f"dt must be > 0, got {dt}")
    v = 0.5 * (v_r + v_l)
    omega = (v_r - v_l) / geom.track_width
    if abs(omega) < OMEGA_STRAIGHT_EPS:
        return Pose(p.x + v * dt * math.cos(p.theta), p.y + v * dt * math.sin(p.theta), p.theta)
    radius = v / omega
    theta_new = p.theta + omega * dt
    return Pose(
        p.x + radius * (math.sin(theta_new) - math.sin(p.theta)),
        p.y - radius * (math.cos(theta_new) - math.cos(p.theta)),
        theta_new,
    )


def _noisy_wheel_speeds(
    v: float, params: SimParams, rng: np.random.Generator
) -> tuple[float, float]:
    """One wheel's (shaft, ground) rim speeds under actuation noise.

    The motor loop holds the shaft speed only within a multiplicative ripple,
    uniform in +-speed_ripple_frac; the encoder sees the shaft. Slip then
    decouples the ground contact from the shaft by additive Gaussian noise
    with variance slip_delta * speed^2, which is what dead reckoning cannot
    observe. A zero command stays exactly zero.
    """
    shaft = v * (1.0 + rng.uniform(-params.speed_ripple_frac, params.speed_ripple_frac))
    ground = shaft + rng.normal(0.0, math.sqrt(params.slip_delta) * abs(v))
    return shaft, ground


def apply_actuation_noise(
    v_r: float, v_l: float, params: SimParams, rng: np.random.Generator
) -> tuple[float, float]:
    """Effective ground rim speeds for commanded speeds: ripple plus slip.

    Each wheel is independent; draw order (right ripple, right slip, left
    ripple, left slip) is fixed so streams stay reproducible.
    """
    _, ground_r = _noisy_wheel_speeds(v_r, params, rng)
    _, ground_l = _noisy_wheel_speeds(v_l, params, rng)
    return ground_r, ground_l


def sample_encoders(
    angle_l: float, angle_r: float, timestamp: float, params: SimParams
) -> EncoderSample:
    """Quantize accumulated wheel shaft angles (radians) to signed counts."""
    counts = params.counts_per_rev
    return EncoderSample(
        ticks_l=math.floor(angle_l / TAU * counts),
        ticks_r=math.floor(angle_r / TAU * counts),
        timestamp=timestamp,
    )


def decode_encoders(
    prev: EncoderSample, curr: EncoderSample, geom: RobotGeometry, params: SimParams
) -> tuple[float, float]:
    """Tick deltas between two samples back to per-wheel arc lengths (ds_l, ds_r)."""
    if not curr.timestamp > prev.timestamp:
        raise ValueError(
            f"encoder timestamps must increase, got {prev.timestamp} -> {curr.timestamp}"
        )
    meters_per_tick = TAU / params.counts_per_rev * geom.wheel_radius
    return (
        (curr.ticks_l - prev.ticks_l) * meters_per_tick,
        (curr.ticks_r - prev.ticks_r) * meters_per_tick,
    )


def sample_compass(
    true_heading: float, timestamp: float, params: SimParams, rng: np.random.Generator
) -> CompassSample:
    """Noisy, quantized heading observation of the true heading."""
    heading = wrap_angle(true_heading + rng.normal(0.0, params.compass_sigma))
    if params.compass_quantum > 0.0:
        heading = wrap_angle(params.compass_quantum * round(heading / params.compass_quantum))
    return CompassSample(heading=heading, timestamp=timestamp)


@dataclass(frozen=True)
class PathSegment:
    """Straight leg toward (x, y), with the commanded cruise and turn rim speeds."""

    x: float
    y: float
    cruise_speed: float = 0.3
    turn_speed: float = 0.05

    def __post_init__(self) -> None:
        for name, value in (("cruise_speed", self.cruise_speed), ("turn_speed", self.turn_speed)):
            if not 0.0 <= value <= MAX_RIM_SPEED:
                raise ValueError(f"{name} must be within [0, {MAX_RIM_SPEED}], got {value}")


@dataclass(frozen=True)
class SegmentPlan:
    """Ordered waypoint segments plus the tracking tolerances.

    A segment is captured once the pose is within ``capture_radius`` of its
    end; ``heading_deadband`` is the heading error below which the follower
    drives straight instead of turning.
    """

    segments: tuple[PathSegment, ...]
    capture_radius: float = 0.05
    heading_deadband: float = 0.05
    loop: bool = False

    def __post_init__(self) -> None:
        if len(self.segments) == 0:
            raise ValueError("plan must contain at least one segment")
        object.__setattr__(self, "segments", tuple(self.segments))
        if not self.capture_radius > 0.0:
            raise ValueError(f"capture_radius must be > 0, got {self.capture_radius}")
        if not self.heading_deadband > 0.0:
            raise ValueError(f"heading_deadband must be > 0, got {self.heading_deadband}")


class PathFollower:
    """Waypoint chaser: full speed on heading, inside-wheel slowdown to turn.

    Turning left commands (cruise, turn) on the (right, left) wheels, turning
    right the mirror image. When the last segment of a non-looping plan is
    captured the command drops to (0, 0); a looping plan restarts instead.
    """

    def __init__(self, plan: SegmentPlan):
        self.plan = plan
        self._index = 0
        self._done = False

    @property
    def finished(self) -> bool:
        return self._done

    def command(self, pose: Pose) -> tuple[float, float]:
        """Commanded (v_right, v_left) rim speeds for the current pose."""
        if self._done:
            return (0.0, 0.0)
        segments = self.plan.segments
        for _ in range(len(segments) + 1):
            seg = segments[self._index]
            if math.hypot(seg.x - pose.x, seg.y - pose.y) > self.plan.capture_radius:
                break
            self._index += 1
            if self._index >= len(segments):
                if not self.plan.loop:
                    self._done = True
                    return (0.0, 0.0)
                self._index = 0
        else:
            # every waypoint sits within the capture radius; nowhere to go
            self._done = True
            return (0.0, 0.0)
        seg = segments[self._index]
        bearing = math.atan2(seg.y - pose.y, seg.x - pose.x)
        error = wrap_angle(bearing - pose.theta)
        if error > self.plan.heading_deadband:
            return (seg.cruise_speed, seg.turn_speed)
        if error < -self.plan.heading_deadband:
            return (seg.turn_speed, seg.cruise_speed)
        return (seg.cruise_speed, seg.cruise_speed)


def rounded_rectangle_path(
    width: float,
    height: float,
    corner_radius: float,
    cruise_speed: float = 0.3,
    turn_speed: float = 0.05,
    corner_points: int = 4,
) -> tuple[PathSegment, ...]:
    """Waypoints tracing a counter-clockwise rounded rectangle from the origin.

    The rectangle spans (0, 0) to (width, height) with quarter-circle corner
    fillets of ``corner_radius``; the first leg runs along +x, so a robot
    starting at the origin with heading 0 is already lined up.
    """
    if width <= 0.0 or height <= 0.0:
        raise ValueError("width and height must be > 0")
    if corner_radius < 0.0 or 2.0 * corner_radius >= min(width, height):
        raise ValueError("corner_radius must satisfy 0 <= 2r < min(width, height)")
    r = corner_radius
    points: list[tuple[float, float]] = []

    def corner(cx: float, cy: float, start_angle: float) -> None:
        if r == 0.0:
            points.append((cx, cy))
            return
        for i in range(1, corner_points + 1):
            a = start_angle + (0.5 * math.pi) * i / corner_points
            points.append((cx + r * math.cos(a), cy + r * math.sin(a)))

    points.append((width - r, 0.0))
    corner(width - r, r, -0.5 * math.pi)
    points.append((width, height - r))
    corner(width - r, height - r, 0.0)
    points.append((r, height))
    corner(r, height - r, 0.5 * math.pi)
    points.append((0.0, r))
    corner(r, r, math.pi)
    return tuple(
        PathSegment(x, y, cruise_speed=cruise_speed, turn_speed=turn_speed) for x, y in points
    )


class SensorSim:
    """One simulation stream: true pose, wheel shaft angles, sensors, and RNG."""

    def __init__(
        self,
        params: SimParams,
        geom: RobotGeometry,
        start: Pose,
        seed: int | None = None,
    ):
        self.params = params
        self.geom = geom
        self.truth = start
        self._angle_l = 0.0
        self._angle_r = 0.0
        self._step_count = 0
        self._rng = np.random.default_rng(params.seed if seed is None else seed)

    @property
    def time(self) -> float:
        return self._step_count * self.params.dt_sensor

    def initial_encoder_sample(self) -> EncoderSample:
        """Encoder reading at t = 0, before any motion."""
        return sample_encoders(self._angle_l, self._angle_r, 0.0, self.params)

    def step(self, cmd_v_r: float, cmd_v_l: float) -> tuple[EncoderSample, CompassSample]:
        """Advance one sensor period under the commanded rim speeds.

        The encoders accumulate shaft rotation while the true pose integrates
        the ground speeds, so slip shows up as odometry error, not as a
        sensing error.
        """
        p = self.params
        shaft_r, ground_r = _noisy_wheel_speeds(cmd_v_r, p, self._rng)
        shaft_l, ground_l = _noisy_wheel_speeds(cmd_v_l, p, self._rng)
        v = 0.5 * (ground_r + ground_l)
        omega = (ground_r - ground_l) / self.geom.track_width
        x, y, th = self.truth.x, self.truth.y, self.truth.theta
        n_sub = p.substeps_per_sample
        h = p.dt_sensor / n_sub
        for _ in range(n_sub):
            if abs(omega) < OMEGA_STRAIGHT_EPS:
                x += v * h * math.cos(th)
                y += v * h * math.sin(th)
            else:
                radius = v / omega
                th_next = th + omega * h
                x += radius * (math.sin(th_next) - math.sin(th))
                y -= radius * (math.cos(th_next) - math.cos(th))
                th = th_next
        self.truth = Pose(x, y, th)
        self._angle_r += shaft_r / self.geom.wheel_radius * p.dt_sensor
        self._angle_l += shaft_l / self.geom.wheel_radius * p.dt_sensor
        self._step_count += 1
        t = self.time
        encoders = sample_encoders(self._angle_l, self._angle_r, t, p)
        compass = sample_compass(self.truth.theta, t, p, self._rng)
        return encoders, compass


def simulate_calibration_run(
    kind: str,
    speed: float,
    n_steps: int,
    params: SimParams,
    geom: RobotGeometry,
    rng: np.random.Generator,
) -> tuple[list[Pose], list[Pose]]:
    """Constant-command run for delta calibration: (true poses, model poses).

    ``kind`` is "straight" (both wheels at ``speed``) or "spin" (wheels at
    +-``speed``). The true series integrates exact arcs under actuation noise;
    the model series dead-reckons the noise-free command. Both start at the
    origin and share the sensor time grid.
    """
    if kind == "straight":
        cmd_r, cmd_l = speed, speed
    elif kind == "spin":
        cmd_r, cmd_l = speed, -speed
    else:
        raise ValueError(f"kind must be 'straight' or 'spin', got {kind!r}")
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    dt = params.dt_sensor
    truth = [Pose(0.0, 0.0, 0.0)]
    model = [Pose(0.0, 0.0, 0.0)]
    model_disp = increments_to_displacement(cmd_l * dt, cmd_r * dt, geom)
    for _ in range(n_steps):
        actual_r, actual_l = apply_actuation_noise(cmd_r, cmd_l, params, rng)
        truth.append(integrate_truth(truth[-1], actual_r, actual_l, dt, geom))
        model.append(dead_reckon_step(model[-1], model_disp))
    return truth, model
