"""Extended Kalman filter for planar pose tracking from wheel odometry.

The state is the pose (x, y, theta). The process model is the midpoint
dead-reckoning step driven by wheel angular speeds over one sampling period,
with additive zero-mean noise on the wheel speeds. Measurements are absolute
pose observations (position plus heading) with diagonal noise, observed
directly, so the measurement Jacobian is the identity.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .kinematics import (
    Displacement,
    Pose,
    RobotGeometry,
    WheelAngularSpeeds,
    dead_reckon_step,
    increments_to_displacement,
    wheel_increments,
    wrap_angle,
)

# Covariance health tolerances: stored matrices are re-symmetrized and must
# be positive semidefinite up to this eigenvalue slack.
MIN_EIGENVALUE = -1e-12


class DegenerateUpdateError(ValueError):
    """The innovation covariance is singular; no usable measurement update."""


@dataclass(frozen=True)
class MeasurementNoise:
    """Diagonal measurement covariance: r11, r22 in m^2 and r33 in rad^2."""

    r11: float
    r22: float
    r33: float

    def __post_init__(self) -> None:
        for name, value in (("r11", self.r11), ("r22", self.r22), ("r33", self.r33)):
            if not (math.isfinite(value) and value >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0, got {value}")

    def as_matrix(self) -> np.ndarray:
        return np.diag([self.r11, self.r22, self.r33])


@dataclass(frozen=True)
class Measurement:
    """Absolute pose observation with its diagonal noise covariance."""

    x: float
    y: float
    theta: float
    noise: MeasurementNoise

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"measurement must be finite, got ({self.x}, {self.y})")
        object.__setattr__(self, "theta", wrap_angle(self.theta))


@dataclass(frozen=True)
class ProcessInput:
    """Wheel speeds applied over one period, with their 2x2 noise covariance.

    ``q`` is the covariance of additive (right, left) wheel-speed noise,
    diagonal and PSD; see :func:`diffdrive_ekf.noise.build_q`.
    """

    speeds: WheelAngularSpeeds
    dt: float
    q: np.ndarray

    def __post_init__(self) -> None:
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise ValueError(f"dt must be > 0, got {self.dt}")
        q = np.array(self.q, dtype=float)
        if q.shape != (2, 2):
            raise ValueError(f"q must be 2x2, got shape {q.shape}")
        if not np.all(np.isfinite(q)):
            raise ValueError("q must be finite")
        if q[0, 0] < 0.0 or q[1, 1] < 0.0 or abs(q[0, 1]) > 1e-12 or abs(q[1, 0]) > 1e-12:
            raise ValueError(f"q must be diagonal with non-negative entries, got {q!r}")
        object.__setattr__(self, "q", q)


@dataclass(frozen=True, eq=False)
class StateEstimate:
    """Gaussian pose belief: mean pose and 3x3 covariance.

    The covariance is re-symmetrized on construction and rejected if it is
    not positive semidefinite (min eigenvalue below -1e-12).
    """

    mean: Pose
    covariance: np.ndarray

    def __post_init__(self) -> None:
        cov = np.array(self.covariance, dtype=float)
        if cov.shape != (3, 3):
            raise ValueError(f"covariance must be 3x3, got shape {cov.shape}")
        if not np.all(np.isfinite(cov)):
            raise ValueError("covariance must be finite")
        cov = 0.5 * (cov + cov.T)
        if float(np.linalg.eigvalsh(cov)[0]) < MIN_EIGENVALUE:
            raise ValueError("covariance is not positive semidefinite")
        object.__setattr__(self, "covariance", cov)


def _displacement_from_input(pin: ProcessInput, geom: RobotGeometry) -> Displacement:
    ds_l, ds_r = wheel_increments(pin.speeds, pin.dt, geom)
    return increments_to_displacement(ds_l, ds_r, geom)


def jacobian_a(p: Pose, d: Displacement) -> np.ndarray:
    """Jacobian of the dead-reckoning step with respect to the state (3x3)."""
    heading = p.theta + 0.5 * d.dtheta
    a = np.eye(3)
    a[0, 2] = -d.ds * math.sin(heading)
    a[1, 2] = d.ds * math.cos(heading)
    return a


def jacobian_w(p: Pose, pin: ProcessInput, geom: RobotGeometry) -> np.ndarray:
    """Jacobian of the step with respect to wheel-speed noise (3x2, cols right/left).

    Chains d(ds, dtheta)/d(omega_r, omega_l) through the midpoint pose update,
    evaluated at the noise-free input (including the dtheta/2 midpoint term).
    """
    d = _displacement_from_input(pin, geom)
    heading = p.theta + 0.5 * d.dtheta
    c = math.cos(heading)
    s = math.sin(heading)
    # per-wheel sensitivities: ds/domega = dt*R/2, dtheta/domega = +-dt*R/L
    k_s = 0.5 * pin.dt * geom.wheel_radius
    k_t = pin.dt * geom.wheel_radius / geom.track_width
    dx_dds, dx_ddt = c, -0.5 * d.ds * s
    dy_dds, dy_ddt = s, 0.5 * d.ds * c
    return np.array(
        [
            [dx_dds * k_s + dx_ddt * k_t, dx_dds * k_s - dx_ddt * k_t],
            [dy_dds * k_s + dy_ddt * k_t, dy_dds * k_s - dy_ddt * k_t],
            [k_t, -k_t],
        ]
    )


def _require_psd(cov: np.ndarray) -> None:
    if float(np.linalg.eigvalsh(cov)[0]) < MIN_EIGENVALUE:
        raise ValueError("covariance is not positive semidefinite")


def predict(s: StateEstimate, pin: ProcessInput, geom: RobotGeometry) -> StateEstimate:
    """Time update: advance the mean with the noise-free input and propagate
    the covariance through the linearized model (A P A^T + W Q W^T)."""
    _require_psd(s.covariance)
    d = _displacement_from_input(pin, geom)
    a = jacobian_a(s.mean, d)
    w = jacobian_w(s.mean, pin, geom)
    cov = a @ s.covariance @ a.T + w @ pin.q @ w.T
    return StateEstimate(dead_reckon_step(s.mean, d), cov)


def update(s: StateEstimate, z: Measurement) -> StateEstimate:
    """Measurement update against an absolute pose observation.

    The gain solves (P + R) K^T = P symmetrically instead of forming an
    explicit inverse; the heading innovation is angle-wrapped before use.
    """
    p = s.covariance
    r = z.noise.as_matrix()
    innovation_cov = p + r
    try:
        gain = scipy.linalg.solve(innovation_cov, p, assume_a="pos").T
    except np.linalg.LinAlgError as exc:
        raise DegenerateUpdateError("innovation covariance is singular") from exc
    innovation = np.array(
        [
            z.x - s.mean.x,
            z.y - s.mean.y,
            wrap_angle(z.theta - s.mean.theta),
        ]
    )
    correction = gain @ innovation
    mean = Pose(
        s.mean.x + correction[0],
        s.mean.y + correction[1],
        s.mean.theta + correction[2],
    )
    cov = (np.eye(3) - gain) @ p
    return StateEstimate(mean, cov)


def step(
    s: StateEstimate,
    pin: ProcessInput,
    geom: RobotGeometry,
    z: Measurement | None = None,
) -> StateEstimate:
    """One filter tick: time update, then measurement update when z is present."""
    prior = predict(s, pin, geom)
    if z is None:
        return prior
    return update(prior, z)
