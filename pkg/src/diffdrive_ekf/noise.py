"""Noise covariance construction and calibration for the odometry EKF.

Process noise scales with wheel speed: each wheel's speed disturbance has
variance delta * omega^2 for a dimensionless constant delta found by
calibration. Measurement noise is estimated online from sliding windows of
residuals (compass vs. encoder heading for r33, odometry-vs-prior position
residuals for r11/r22).
"""

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .kinematics import Pose, RobotGeometry, WheelAngularSpeeds, wrap_angle


class InsufficientSamplesError(ValueError):
    """A residual window was queried before it held any samples."""


@dataclass(frozen=True)
class ProcessNoiseParams:
    """Proportionality constant between wheel-speed variance and speed squared."""

    delta: float = 0.01

    def __post_init__(self) -> None:
        if not (math.isfinite(self.delta) and self.delta >= 0.0):
            raise ValueError(f"delta must be finite and >= 0, got {self.delta}")


def build_q(w: WheelAngularSpeeds, params: ProcessNoiseParams) -> np.ndarray:
    """Input-noise covariance diag(delta*omega_r^2, delta*omega_l^2)."""
    return np.diag([params.delta * w.omega_r**2, params.delta * w.omega_l**2])


class ResidualWindow:
    """Fixed-capacity ring of paired residual samples; newest samples kept."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        self._pairs: deque[tuple[float, float]] = deque(maxlen=capacity)

    @property
    def capacity(self) -> int:
        return self._pairs.maxlen or 0

    @property
    def full(self) -> bool:
        return len(self._pairs) == self._pairs.maxlen

    def push(self, first: float, second: float) -> None:
        self._pairs.append((float(first), float(second)))

    def pairs(self) -> tuple[tuple[float, float], ...]:
        return tuple(self._pairs)

    def __len__(self) -> int:
        return len(self._pairs)


def estimate_r33(win: ResidualWindow) -> float:
    """Heading variance: mean squared wrapped compass-minus-encoder heading gap."""
    if len(win) == 0:
        raise InsufficientSamplesError("r33 window holds no samples")
    gaps = [wrap_angle(compass - encoder) for compass, encoder in win.pairs()]
    return float(np.mean(np.square(gaps)))


def estimate_r_position(win: ResidualWindow) -> tuple[float, float]:
    """Position variances (r11, r22): per-axis mean squared residual."""
    if len(win) == 0:
        raise InsufficientSamplesError("position window holds no samples")
    residuals = np.asarray(win.pairs(), dtype=float)
    r11, r22 = np.mean(np.square(residuals), axis=0)
    return float(r11), float(r22)


def _series_increments(poses: Sequence[Pose]) -> tuple[np.ndarray, np.ndarray]:
    """Per-step (|translation|, wrapped heading change) along a pose series."""
    xs = np.array([p.x for p in poses])
    ys = np.array([p.y for p in poses])
    ths = [p.theta for p in poses]
    ds = np.hypot(np.diff(xs), np.diff(ys))
    dth = np.array([wrap_angle(b - a) for a, b in zip(ths[:-1], ths[1:])])
    return ds, dth


def calibrate_delta(
    truth_runs: Iterable[tuple[Sequence[Pose], Sequence[Pose]]],
    geom: RobotGeometry,
    dt: float,
) -> ProcessNoiseParams:
    """Fit delta from constant-speed straight and spin runs against ground truth.

    Each run pairs a true pose series with the model-predicted series on the
    same time grid. Straight runs contribute per-step translation errors and
    spin runs per-step rotation errors; both error variances are proportional
    to delta times the squared commanded wheel speed, so delta comes from a
    least-squares fit through the origin over all steps of all runs.

    Raises ValueError when no straight or no spin run is given, when a run is
    neither, or when every commanded speed is zero.
    """
    if not (math.isfinite(dt) and dt > 0.0):
        raise ValueError(f"dt must be > 0, got {dt}")
    sum_xy = 0.0
    sum_xx = 0.0
    n_straight = 0
    n_spin = 0
    for truth, model in truth_runs:
        if len(truth) != len(model) or len(truth) < 2:
            raise ValueError("each run needs truth/model series of equal length >= 2")
        ds_t, dth_t = _series_increments(truth)
        ds_m, dth_m = _series_increments(model)
        # constant commanded speeds -> constant model increments
        ds0 = float(np.mean(ds_m))
        dth0 = float(np.mean(dth_m))
        ds_r0 = ds0 + 0.5 * geom.track_width * dth0
        ds_l0 = ds0 - 0.5 * geom.track_width * dth0
        scale = geom.wheel_radius * dt
        speed_sq = (ds_r0 / scale) ** 2 + (ds_l0 / scale) ** 2
        if np.max(np.abs(dth_m)) < 1e-9:
            n_straight += 1
            x = scale**2 * speed_sq / 4.0  # var(center translation error) = x * delta
            errors = ds_t - ds_m
        elif np.max(np.abs(ds_m)) < 1e-12:
            n_spin += 1
            x = (scale / geom.track_width) ** 2 * speed_sq  # var(heading error) = x * delta
            errors = np.array([wrap_angle(t - m) for t, m in zip(dth_t, dth_m)])
        else:
            raise ValueError("calibration runs must be straight or pure rotation")
        sum_xy += x * float(np.sum(np.square(errors)))
        sum_xx += len(errors) * x * x
    if n_straight == 0 or n_spin == 0:
        raise ValueError("need at least one straight run and one spin run")
    if sum_xx <= 0.0:
        raise ValueError("degenerate calibration input: all commanded speeds are zero")
    return ProcessNoiseParams(delta=max(0.0, sum_xy / sum_xx))
