"""Differential-drive kinematics: wheel speeds, odometry increments, pose updates."""

import math
from dataclasses import dataclass

TAU = 2.0 * math.pi


def wrap_angle(theta: float) -> float:
    """Wrap an angle (radians) to the half-open interval (-pi, pi]."""
    if not math.isfinite(theta):
        raise ValueError(f"angle must be finite, got {theta!r}")
    wrapped = math.remainder(theta, TAU)
    if wrapped <= -math.pi:
        wrapped += TAU
    return wrapped


@dataclass(frozen=True)
class Pose:
    """Planar pose in the global frame: x, y in meters, heading theta in radians.

    The heading is always stored wrapped to (-pi, pi].
    """

    x: float
    y: float
    theta: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"pose coordinates must be finite, got ({self.x}, {self.y})")
        object.__setattr__(self, "theta", wrap_angle(self.theta))


@dataclass(frozen=True)
class RobotGeometry:
    """Drive geometry: wheel radius and distance between the two wheels (meters)."""

    wheel_radius: float = 0.05
    track_width: float = 0.60

    def __post_init__(self) -> None:
        if not (math.isfinite(self.wheel_radius) and self.wheel_radius > 0.0):
            raise ValueError(f"wheel_radius must be > 0, got {self.wheel_radius}")
        if not (math.isfinite(self.track_width) and self.track_width > 0.0):
            raise ValueError(f"track_width must be > 0, got {self.track_width}")


@dataclass(frozen=True)
class WheelAngularSpeeds:
    """Wheel shaft angular speeds (rad/s), right then left."""

    omega_r: float
    omega_l: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.omega_r) and math.isfinite(self.omega_l)):
            raise ValueError(f"wheel speeds must be finite, got ({self.omega_r}, {self.omega_l})")


@dataclass(frozen=True)
class BodyVelocity:
    """Body twist: translational speed v (m/s) and turn rate omega (rad/s)."""

    v: float
    omega: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.v) and math.isfinite(self.omega)):
            raise ValueError(f"body velocity must be finite, got ({self.v}, {self.omega})")


@dataclass(frozen=True)
class Displacement:
    """Per-sample odometry increment: wheel arc lengths, center arc, heading change."""

    ds_l: float
    ds_r: float
    ds: float
    dtheta: float


def wheels_to_body(v_r: float, v_l: float, geom: RobotGeometry) -> BodyVelocity:
    """Map wheel rim speeds (m/s) to the body velocity.

    Sign convention: positive omega is counter-clockwise, i.e. the right wheel
    running faster than the left turns the robot left. The same convention is
    used by every increment/displacement function below.
    """
    return BodyVelocity(v=(v_r + v_l) / 2.0, omega=(v_r - v_l) / geom.track_width)


def pose_rate(p: Pose, b: BodyVelocity) -> tuple[float, float, float]:
    """Instantaneous pose time-derivative (dx/dt, dy/dt, dtheta/dt)."""
    return (b.v * math.cos(p.theta), b.v * math.sin(p.theta), b.omega)


def wheel_increments(w: WheelAngularSpeeds, dt: float, geom: RobotGeometry) -> tuple[float, float]:
    """Arc length rolled by each wheel over dt seconds, as (ds_l, ds_r) meters."""
    if not (dt > 0.0 and math.isfinite(dt)):
        raise ValueError(f"dt must be > 0, got {dt}")
    scale = dt * geom.wheel_radius
    return (scale * w.omega_l, scale * w.omega_r)


def increments_to_displacement(ds_l: float, ds_r: float, geom: RobotGeometry) -> Displacement:
    """Combine per-wheel arc lengths into a center displacement and heading change."""
    return Displacement(
        ds_l=ds_l,
        ds_r=ds_r,
        ds=(ds_l + ds_r) / 2.0,
        dtheta=(ds_r - ds_l) / geom.track_width,
    )


def dead_reckon_step(p: Pose, d: Displacement) -> Pose:
    """Advance a pose by one odometry increment using the midpoint heading.

    The translation is applied along theta + dtheta/2. This is deliberately a
    chord approximation of the underlying arc: it is the process model the
    filter estimates, while exact-arc integration lives in the simulator.
    """
    heading = p.theta + 0.5 * d.dtheta
    return Pose(
        x=p.x + d.ds * math.cos(heading),
        y=p.y + d.ds * math.sin(heading),
        theta=p.theta + d.dtheta,
    )
