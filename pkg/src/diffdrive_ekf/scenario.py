"""Closed-loop scenario runner: truth, sensors, odometry, and EKF on one stream.

Each sensor tick feeds the same encoder/compass data to a dead-reckoning
(odometry-only) track and, when enabled, to the EKF. The path controller is
driven by whichever estimate is active, so estimation error feeds back into
the driven trajectory exactly as it would on the robot.
"""

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import ScenarioConfig
from .ekf import Measurement, MeasurementNoise, ProcessInput, StateEstimate, predict, update
from .kinematics import WheelAngularSpeeds, dead_reckon_step, increments_to_displacement, wrap_angle
from .noise import ResidualWindow, build_q, estimate_r33, estimate_r_position
from .simulator import PathFollower, SensorSim, decode_encoders

# start pose is known well at t = 0
INITIAL_COVARIANCE = np.diag([1e-6, 1e-6, 1e-6])

CSV_COLUMNS = [
    "t",
    "x_true", "y_true", "th_true",
    "x_odo", "y_odo", "th_odo",
    "x_ekf", "y_ekf", "th_ekf",
    "p11", "p22", "p33",
    "dx_odo", "dy_odo", "dth_odo",
    "dx_ekf", "dy_ekf", "dth_ekf",
]


@dataclass
class TrajectoryLog:
    """Per-tick pose rows for truth, odometry, and (optionally) the EKF.

    ``ekf``, ``p_diag``, and ``dev_ekf`` are None when the filter was off.
    Deviation arrays are estimator minus truth with the heading wrapped.
    """

    t: np.ndarray
    truth: np.ndarray
    odo: np.ndarray
    ekf: np.ndarray | None
    p_diag: np.ndarray | None
    dev_odo: np.ndarray
    dev_ekf: np.ndarray | None


def _deviations(estimate: np.ndarray, truth: np.ndarray) -> np.ndarray:
    dev = estimate - truth
    dev[:, 2] = np.array([wrap_angle(v) for v in dev[:, 2]])
    return dev


def run_scenario(cfg: ScenarioConfig, seed: int) -> TrajectoryLog:
    """Run one scenario under the given RNG seed; fully deterministic."""
    geom = cfg.geometry
    params = cfg.sim
    dt = params.dt_sensor
    n_ticks = int(round(cfg.duration / dt))
    sim = SensorSim(params, geom, cfg.start, seed=seed)
    follower = PathFollower(cfg.plan)
    odo = cfg.start
    prev_enc = sim.initial_encoder_sample()

    if cfg.with_ekf:
        estimate = StateEstimate(cfg.start, INITIAL_COVARIANCE)
        heading_window = ResidualWindow(cfg.residual_window)
        position_window = ResidualWindow(cfg.residual_window)
        prev_compass = cfg.start.theta

    t_rows = np.empty(n_ticks)
    truth_rows = np.empty((n_ticks, 3))
    odo_rows = np.empty((n_ticks, 3))
    ekf_rows = np.empty((n_ticks, 3)) if cfg.with_ekf else None
    p_rows = np.empty((n_ticks, 3)) if cfg.with_ekf else None

    for k in range(n_ticks):
        control_pose = estimate.mean if cfg.with_ekf else odo
        cmd_r, cmd_l = follower.command(control_pose)
        encoders, compass = sim.step(cmd_r, cmd_l)
        ds_l, ds_r = decode_encoders(prev_enc, encoders, geom, params)
        prev_enc = encoders
        displacement = increments_to_displacement(ds_l, ds_r, geom)
        odo = dead_reckon_step(odo, displacement)

        if cfg.with_ekf:
            wheel_scale = geom.wheel_radius * dt
            speeds = WheelAngularSpeeds(ds_r / wheel_scale, ds_l / wheel_scale)
            pin = ProcessInput(speeds, dt, build_q(speeds, cfg.delta))
            prior = predict(estimate, pin, geom)
            # r33 compares per-tick heading deflections, not accumulated
            # headings: against the absolute encoder heading the window would
            # measure encoder drift instead of compass noise and r33 would
            # grow without bound.
            heading_window.push(wrap_angle(compass.heading - prev_compass), displacement.dtheta)
            prev_compass = compass.heading
            position_window.push(odo.x - prior.mean.x, odo.y - prior.mean.y)
            # floors bound the window estimates from below at all times: a
            # zero estimated variance would declare the measurement perfect,
            # collapse P, and leave the next innovation covariance singular.
            if position_window.full:
                r11, r22 = estimate_r_position(position_window)
                r11, r22 = max(r11, cfg.r11_floor), max(r22, cfg.r22_floor)
            else:
                r11, r22 = cfg.r11_floor, cfg.r22_floor
            r33 = estimate_r33(heading_window) if heading_window.full else 0.0
            r33 = max(r33, cfg.r33_floor)
            z = Measurement(odo.x, odo.y, compass.heading, MeasurementNoise(r11, r22, r33))
            estimate = update(prior, z)
            ekf_rows[k] = (estimate.mean.x, estimate.mean.y, estimate.mean.theta)
            p_rows[k] = np.diag(estimate.covariance)

        t_rows[k] = (k + 1) * dt
        truth_rows[k] = (sim.truth.x, sim.truth.y, sim.truth.theta)
        odo_rows[k] = (odo.x, odo.y, odo.theta)

    return TrajectoryLog(
        t=t_rows,
        truth=truth_rows,
        odo=odo_rows,
        ekf=ekf_rows,
        p_diag=p_rows,
        dev_odo=_deviations(odo_rows, truth_rows),
        dev_ekf=_deviations(ekf_rows, truth_rows) if cfg.with_ekf else None,
    )


def _fmt(value: float) -> str:
    return f"{value:.9g}"


def write_log_csv(log: TrajectoryLog, path: str | Path) -> None:
    """Write a trajectory log with the fixed column schema, 9 significant digits.

    EKF columns are left empty when the filter was off.
    """
    lines = [",".join(CSV_COLUMNS)]
    n = log.t.shape[0]
    for i in range(n):
        fields = [_fmt(log.t[i])]
        fields += [_fmt(v) for v in log.truth[i]]
        fields += [_fmt(v) for v in log.odo[i]]
        if log.ekf is not None:
            fields += [_fmt(v) for v in log.ekf[i]]
            fields += [_fmt(v) for v in log.p_diag[i]]
        else:
            fields += [""] * 6
        fields += [_fmt(v) for v in log.dev_odo[i]]
        if log.dev_ekf is not None:
            fields += [_fmt(v) for v in log.dev_ekf[i]]
        else:
            fields += [""] * 3
        lines.append(",".join(fields))
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def read_log_csv(path: str | Path) -> TrajectoryLog:
    """Read a trajectory log written by :func:`write_log_csv`."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [line for line in text.splitlines() if line]
    if not lines or lines[0].split(",") != CSV_COLUMNS:
        raise ValueError(f"{path}: missing or unexpected header row")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != len(CSV_COLUMNS):
            raise ValueError(f"{path}: line {lineno}: expected {len(CSV_COLUMNS)} fields")
        rows.append([float(f) if f else math.nan for f in fields])
    if not rows:
        raise ValueError(f"{path}: no data rows")
    data = np.array(rows)
    has_ekf = not np.all(np.isnan(data[:, 7:13]))
    return TrajectoryLog(
        t=data[:, 0],
        truth=data[:, 1:4],
        odo=data[:, 4:7],
        ekf=data[:, 7:10] if has_ekf else None,
        p_diag=data[:, 10:13] if has_ekf else None,
        dev_odo=data[:, 13:16],
        dev_ekf=data[:, 16:19] if has_ekf else None,
    )
