"""Building a 3D point cloud from a pitched 2D range scanner.

A planar scanner sweeps bearings beta across 180 degrees; pitching the whole
scan plane up by alpha (0..25 degrees) turns the stack of 2D sweeps into 3D
data. This script synthesizes the sweep a scanner would return when facing a
flat wall 5 m ahead, projects it to Cartesian points, and verifies the cloud
is planar. It also writes the sweep/cloud text files understood by

    diffdrive-ekf lrf-project <sweep.txt> <cloud.txt>
"""

import math
from pathlib import Path

import numpy as np

from diffdrive_ekf.lrf import load_sweep, sweep_to_cloud, write_cloud

WALL_X = 5.0
OUT_DIR = Path(__file__).parent / "output"


def main():
    OUT_DIR.mkdir(exist_ok=True)
    sweep_path = OUT_DIR / "wall_sweep.txt"

    lines = []
    for alpha_deg in range(0, 26, 1):
        for beta_deg in range(-80, 81, 1):
            rng = WALL_X / (math.cos(math.radians(alpha_deg)) * math.cos(math.radians(beta_deg)))
            if rng <= 80.0:
                lines.append(f"{alpha_deg} {beta_deg} {rng:.9g}")
    sweep_path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    print(f"synthetic wall sweep: {len(lines)} beams -> {sweep_path}")

    points, rejected = sweep_to_cloud(load_sweep(sweep_path))
    print(f"projected {len(points)} points ({rejected} rejected)")

    xs = np.array([p.x for p in points])
    zs = np.array([p.z for p in points])
    print(f"planarity: max |x - {WALL_X}| = {np.max(np.abs(xs - WALL_X)):.2e} m")
    print(f"wall coverage: z from {zs.min():.2f} to {zs.max():.2f} m")

    cloud_path = OUT_DIR / "wall_cloud.txt"
    write_cloud(points, cloud_path)
    print(f"cloud written to {cloud_path}")


if __name__ == "__main__":
    main()
