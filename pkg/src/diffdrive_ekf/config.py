"""Scenario configuration: flat key=value files describing one simulation setup.

Every key has a default; a config file only lists overrides. Angles that
describe the compass cross the file boundary in degrees, everything else is
SI (meters, seconds, radians).
"""

import math
from dataclasses import dataclass
from pathlib import Path

from .kinematics import Pose, RobotGeometry
from .noise import ProcessNoiseParams
from .simulator import PathSegment, SegmentPlan, SimParams, rounded_rectangle_path


class ConfigError(ValueError):
    """A scenario config field is missing, unknown, or invalid."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"config field '{field}': {message}")


DEFAULTS: dict[str, str] = {
    # robot geometry
    "wheel_radius": "0.05",
    "track_width": "0.6",
    # sampling and sensors
    "dt_sensor": "0.1",
    "dt_fine": "0.001",
    "encoder_cpr": "500",
    "quad_decode_factor": "4",
    "compass_sigma_deg": "0.1",
    "compass_quantum_deg": "0.1",
    # actuation noise
    "speed_ripple_frac": "0.05",
    "slip_delta": "0.01",
    # path plan
    "path": "rounded_rectangle",
    "rect_width": "4.0",
    "rect_height": "3.0",
    "corner_radius": "0.5",
    "waypoints": "",
    "loop": "true",
    "cruise_speed": "0.3",
    "turn_speed": "0.05",
    "capture_radius": "0.05",
    "heading_deadband": "0.05",
    # run
    "duration": "60.0",
    "start_x": "0.0",
    "start_y": "0.0",
    "start_theta": "0.0",
    "seeds": "1",
    # estimator
    "with_ekf": "true",
    "delta": "0.01",
    "r11_floor": "1e-4",
    "r22_floor": "1e-4",
    "r33_floor_deg": "0.1",
    "residual_window": "50",
}


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully resolved scenario: geometry, sensors, path plan, and filter knobs."""

    geometry: RobotGeometry
    sim: SimParams
    plan: SegmentPlan
    duration: float
    start: Pose
    seeds: tuple[int, ...]
    with_ekf: bool
    delta: ProcessNoiseParams
    r11_floor: float
    r22_floor: float
    r33_floor: float
    residual_window: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.duration) and self.duration >= self.sim.dt_sensor):
            raise ConfigError("duration", f"must cover at least one sensor period, got {self.duration}")
        if len(self.seeds) == 0:
            raise ConfigError("seeds", "at least one seed is required")
        for name in ("r11_floor", "r22_floor", "r33_floor"):
            if getattr(self, name) < 0.0:
                raise ConfigError(name, "must be >= 0")
        if self.residual_window < 1:
            raise ConfigError("residual_window", "must be >= 1")


def _parse_float(values: dict[str, str], key: str) -> float:
    try:
        return float(values[key])
    except ValueError:
        raise ConfigError(key, f"expected a number, got {values[key]!r}") from None


def _parse_int(values: dict[str, str], key: str) -> int:
    try:
        return int(values[key])
    except ValueError:
        raise ConfigError(key, f"expected an integer, got {values[key]!r}") from None


def _parse_bool(values: dict[str, str], key: str) -> bool:
    text = values[key].lower()
    if text in ("true", "false"):
        return text == "true"
    raise ConfigError(key, f"expected true or false, got {values[key]!r}")


def _parse_seeds(values: dict[str, str]) -> tuple[int, ...]:
    try:
        seeds = tuple(int(part) for part in values["seeds"].split(",") if part.strip())
    except ValueError:
        raise ConfigError("seeds", f"expected comma-separated integers, got {values['seeds']!r}") from None
    if not seeds:
        raise ConfigError("seeds", "at least one seed is required")
    return seeds


def _parse_waypoints(values: dict[str, str]) -> list[tuple[float, float]]:
    points = []
    for chunk in values["waypoints"].split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise ConfigError("waypoints", f"expected 'x,y' pairs separated by ';', got {chunk!r}")
        try:
            points.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise ConfigError("waypoints", f"non-numeric coordinate in {chunk!r}") from None
    return points


def parse_config(text: str) -> ScenarioConfig:
    """Parse config text (one "key = value" per line, '#' comments) into a scenario."""
    values = dict(DEFAULTS)
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in DEFAULTS:
            raise ConfigError(key, "unknown key")
        if key in seen:
            raise ConfigError(key, "duplicate key")
        seen.add(key)
        values[key] = value

    try:
        geometry = RobotGeometry(
            wheel_radius=_parse_float(values, "wheel_radius"),
            track_width=_parse_float(values, "track_width"),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError("wheel_radius/track_width", str(exc)) from None

    try:
        sim = SimParams(
            dt_sensor=_parse_float(values, "dt_sensor"),
            dt_fine=_parse_float(values, "dt_fine"),
            encoder_cpr=_parse_int(values, "encoder_cpr"),
            quad_decode_factor=_parse_int(values, "quad_decode_factor"),
            compass_sigma=math.radians(_parse_float(values, "compass_sigma_deg")),
            compass_quantum=math.radians(_parse_float(values, "compass_quantum_deg")),
            speed_ripple_frac=_parse_float(values, "speed_ripple_frac"),
            slip_delta=_parse_float(values, "slip_delta"),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError("sim parameters", str(exc)) from None

    cruise = _parse_float(values, "cruise_speed")
    turn = _parse_float(values, "turn_speed")
    path_kind = values["path"]
    try:
        if path_kind == "rounded_rectangle":
            segments = rounded_rectangle_path(
                width=_parse_float(values, "rect_width"),
                height=_parse_float(values, "rect_height"),
                corner_radius=_parse_float(values, "corner_radius"),
                cruise_speed=cruise,
                turn_speed=turn,
            )
        elif path_kind == "waypoints":
            points = _parse_waypoints(values)
            if not points:
                raise ConfigError("waypoints", "path = waypoints needs a non-empty waypoint list")
            segments = tuple(
                PathSegment(x, y, cruise_speed=cruise, turn_speed=turn) for x, y in points
            )
        else:
            raise ConfigError("path", f"expected rounded_rectangle or waypoints, got {path_kind!r}")
        plan = SegmentPlan(
            segments=segments,
            capture_radius=_parse_float(values, "capture_radius"),
            heading_deadband=_parse_float(values, "heading_deadband"),
            loop=_parse_bool(values, "loop"),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError("path", str(exc)) from None

    try:
        delta = ProcessNoiseParams(delta=_parse_float(values, "delta"))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError("delta", str(exc)) from None

    try:
        start = Pose(
            _parse_float(values, "start_x"),
            _parse_float(values, "start_y"),
            _parse_float(values, "start_theta"),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError("start_x/start_y/start_theta", str(exc)) from None

    return ScenarioConfig(
        geometry=geometry,
        sim=sim,
        plan=plan,
        duration=_parse_float(values, "duration"),
        start=start,
        seeds=_parse_seeds(values),
        with_ekf=_parse_bool(values, "with_ekf"),
        delta=delta,
        r11_floor=_parse_float(values, "r11_floor"),
        r22_floor=_parse_float(values, "r22_floor"),
        r33_floor=math.radians(_parse_float(values, "r33_floor_deg")) ** 2,
        residual_window=_parse_int(values, "residual_window"),
    )


def load_config(path: str | Path) -> ScenarioConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))
