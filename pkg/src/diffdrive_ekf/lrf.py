"""Pitched planar range scans to 3D point clouds.

Sensor frame: x forward, y left, z up. A scan plane pitched up by alpha about
the sensor origin sweeps in-plane bearings beta; each beam returns a range.
Angle units are radians inside the library and degrees at the file boundary.
"""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

RANGE_MIN = 0.04  # meters
RANGE_MAX = 80.0  # meters
BETA_LIMIT = 0.5 * math.pi  # half of the 180-degree horizontal field of view
ALPHA_MAX = math.radians(25.0)  # vertical field of view


@dataclass(frozen=True)
class LrfSample:
    """One beam: scan-plane pitch alpha, in-plane bearing beta, measured range."""

    alpha: float
    beta: float
    range_m: float

    def __post_init__(self) -> None:
        if not RANGE_MIN <= self.range_m <= RANGE_MAX:
            raise ValueError(
                f"range {self.range_m} m outside [{RANGE_MIN}, {RANGE_MAX}]"
            )
        if not -BETA_LIMIT <= self.beta <= BETA_LIMIT:
            raise ValueError(f"beta {self.beta} rad outside [-pi/2, pi/2]")
        if not 0.0 <= self.alpha <= ALPHA_MAX:
            raise ValueError(f"alpha {self.alpha} rad outside [0, {ALPHA_MAX:.6f}]")


@dataclass(frozen=True)
class Point3:
    """Cartesian point in the sensor frame (meters)."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        if not all(map(math.isfinite, (self.x, self.y, self.z))):
            raise ValueError(f"point must be finite, got ({self.x}, {self.y}, {self.z})")


def project(s: LrfSample) -> Point3:
    """Beam to Cartesian point; the point norm equals the range."""
    cos_b = math.cos(s.beta)
    return Point3(
        x=s.range_m * math.cos(s.alpha) * cos_b,
        y=s.range_m * math.sin(s.beta),
        z=s.range_m * math.sin(s.alpha) * cos_b,
    )


def unproject(p: Point3) -> LrfSample:
    """Cartesian point back to a beam sample; rejects points outside the field of view."""
    range_m = math.sqrt(p.x * p.x + p.y * p.y + p.z * p.z)
    if range_m == 0.0:
        raise ValueError("cannot unproject the origin")
    alpha = math.atan2(p.z, p.x)
    beta = math.asin(max(-1.0, min(1.0, p.y / range_m)))
    return LrfSample(alpha=alpha, beta=beta, range_m=range_m)


def sweep_to_cloud(
    sweep: Iterable[tuple[float, Sequence[tuple[float, float]]]],
) -> tuple[list[Point3], int]:
    """Project a pitched sweep [(alpha, [(beta, range), ...]), ...] to points.

    Keeps input order; beams outside the valid ranges are dropped and tallied
    instead of failing the sweep. Returns (points, rejected_count).
    """
    points: list[Point3] = []
    rejected = 0
    for alpha, beams in sweep:
        for beta, range_m in beams:
            try:
                sample = LrfSample(alpha=alpha, beta=beta, range_m=range_m)
            except ValueError:
                rejected += 1
                continue
            points.append(project(sample))
    return points, rejected


def parse_sweep_text(text: str) -> list[tuple[float, list[tuple[float, float]]]]:
    """Parse sweep lines "alpha_deg beta_deg range_m" into radian rows.

    Consecutive lines sharing a pitch value are grouped into one row. Blank
    lines and lines starting with '#' are skipped; anything else malformed
    raises ValueError naming the line number.
    """
    rows: list[tuple[float, list[tuple[float, float]]]] = []
    last_alpha_deg: float | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 'alpha_deg beta_deg range_m', got {raw!r}")
        try:
            alpha_deg, beta_deg, range_m = (float(p) for p in parts)
        except ValueError:
            raise ValueError(f"line {lineno}: non-numeric field in {raw!r}") from None
        beam = (math.radians(beta_deg), range_m)
        if rows and alpha_deg == last_alpha_deg:
            rows[-1][1].append(beam)
        else:
            rows.append((math.radians(alpha_deg), [beam]))
            last_alpha_deg = alpha_deg
    return rows


def load_sweep(path: str | Path) -> list[tuple[float, list[tuple[float, float]]]]:
    return parse_sweep_text(Path(path).read_text(encoding="utf-8"))


def write_cloud(points: Iterable[Point3], path: str | Path) -> None:
    """Write points as "x y z" lines with 9 significant digits."""
    lines = [f"{p.x:.9g} {p.y:.9g} {p.z:.9g}" for p in points]
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
