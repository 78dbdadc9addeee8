"""Differential-drive robot localization toolkit.

Kinematic dead reckoning, wheel-encoder/compass EKF fusion, a deterministic
sensor simulator with a waypoint controller, pitched range-scan geometry, and
a scenario harness for with/without-filter comparisons.
"""

from .config import ConfigError, ScenarioConfig, load_config, parse_config
from .ekf import (
    DegenerateUpdateError,
    Measurement,
    MeasurementNoise,
    ProcessInput,
    StateEstimate,
)
from .kinematics import (
    BodyVelocity,
    Displacement,
    Pose,
    RobotGeometry,
    WheelAngularSpeeds,
    dead_reckon_step,
    wrap_angle,
)
from .metrics import (
    EstimatorErrors,
    MonteCarloResult,
    RunSummary,
    compute_metrics,
    monte_carlo,
)
from .noise import InsufficientSamplesError, ProcessNoiseParams, ResidualWindow, calibrate_delta
from .scenario import TrajectoryLog, read_log_csv, run_scenario, write_log_csv
from .simulator import (
    CompassSample,
    EncoderSample,
    PathFollower,
    PathSegment,
    SegmentPlan,
    SensorSim,
    SimParams,
    rounded_rectangle_path,
)

__all__ = [
    "BodyVelocity",
    "CompassSample",
    "ConfigError",
    "DegenerateUpdateError",
    "Displacement",
    "EncoderSample",
    "EstimatorErrors",
    "InsufficientSamplesError",
    "Measurement",
    "MeasurementNoise",
    "MonteCarloResult",
    "PathFollower",
    "PathSegment",
    "Pose",
    "ProcessInput",
    "ProcessNoiseParams",
    "ResidualWindow",
    "RobotGeometry",
    "RunSummary",
    "ScenarioConfig",
    "SegmentPlan",
    "SensorSim",
    "SimParams",
    "StateEstimate",
    "TrajectoryLog",
    "WheelAngularSpeeds",
    "calibrate_delta",
    "compute_metrics",
    "dead_reckon_step",
    "load_config",
    "monte_carlo",
    "parse_config",
    "read_log_csv",
    "run_scenario",
    "wrap_angle",
    "write_log_csv",
]

__version__ = "0.1.0"
