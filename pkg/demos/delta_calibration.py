"""Recovering the wheel-noise constant from drive-and-measure experiments.

The process noise model puts variance delta * omega^2 on each wheel speed.
To find delta, drive the robot straight at a range of speeds (translation
errors) and spin it in place (rotation errors), compare the true motion
against the kinematic model's prediction, and regress the squared errors on
the squared commanded speed. Here the "true" motion comes from the simulator
with a known injected delta, so the recovery can be checked in closed loop.
"""

import numpy as np

from diffdrive_ekf import calibrate_delta
from diffdrive_ekf.kinematics import RobotGeometry
from diffdrive_ekf.simulator import SimParams, simulate_calibration_run

geom = RobotGeometry(wheel_radius=0.05, track_width=0.60)
injected = 0.01

# speed ripple off: calibration isolates the speed-proportional slip term
params = SimParams(speed_ripple_frac=0.0, slip_delta=injected, compass_sigma=0.0)
rng = np.random.default_rng(7)

runs = []
for speed in np.linspace(0.06, 0.3, 25):  # minimum to maximum tangential speed
    runs.append(simulate_calibration_run("straight", float(speed), 100, params, geom, rng))
for speed in np.linspace(0.05, 0.3, 25):  # spin about the robot's own axis
    runs.append(simulate_calibration_run("spin", float(speed), 100, params, geom, rng))

recovered = calibrate_delta(runs, geom, params.dt_sensor).delta
print(f"injected delta:  {injected:.4f}")
print(f"recovered delta: {recovered:.4f}  (error {100 * (recovered / injected - 1):+.1f}%)")

print("\nrecovery as the experiment grows:")
for n_runs in (2, 6, 14, 30, 50):
    subset = runs[: n_runs // 2] + runs[25 : 25 + n_runs // 2]
    d = calibrate_delta(subset, geom, params.dt_sensor).delta
    print(f"  {n_runs:>3} runs -> delta = {d:.4f}")
