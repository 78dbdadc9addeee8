"""Deviation metrics for scenario runs and seed-batched comparisons."""

from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .config import ScenarioConfig
from .scenario import TrajectoryLog, read_log_csv, run_scenario, write_log_csv


@dataclass(frozen=True)
class EstimatorErrors:
    """Error statistics of one estimator against truth over a run."""

    rms_x: float
    rms_y: float
    rms_theta: float
    max_position: float
    max_heading: float
    final_position: float
    final_heading: float

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class RunSummary:
    """Per-run metrics for the odometry track and, when present, the EKF."""

    odo: EstimatorErrors
    ekf: EstimatorErrors | None


@dataclass(frozen=True)
class MonteCarloResult:
    """Per-seed summaries (sorted by seed) and their median/mean aggregates."""

    per_seed: tuple[tuple[int, RunSummary], ...]
    median: RunSummary
    mean: RunSummary
    failures: tuple[tuple[int, str], ...]


def _errors_from_deviations(dev: np.ndarray) -> EstimatorErrors:
    position = np.hypot(dev[:, 0], dev[:, 1])
    heading = np.abs(dev[:, 2])
    rms = np.sqrt(np.mean(np.square(dev), axis=0))
    return EstimatorErrors(
        rms_x=float(rms[0]),
        rms_y=float(rms[1]),
        rms_theta=float(rms[2]),
        max_position=float(np.max(position)),
        max_heading=float(np.max(heading)),
        final_position=float(position[-1]),
        final_heading=float(heading[-1]),
    )


def compute_metrics(log: TrajectoryLog) -> RunSummary:
    """Summarize a trajectory log from its stored deviation columns."""
    if log.t.shape[0] == 0:
        raise ValueError("trajectory log is empty")
    return RunSummary(
        odo=_errors_from_deviations(log.dev_odo),
        ekf=_errors_from_deviations(log.dev_ekf) if log.dev_ekf is not None else None,
    )


def _aggregate(summaries: list[RunSummary], reducer) -> RunSummary:
    def reduce_errors(errs: list[EstimatorErrors]) -> EstimatorErrors:
        return EstimatorErrors(
            **{
                f.name: float(reducer([getattr(e, f.name) for e in errs]))
                for f in fields(EstimatorErrors)
            }
        )

    has_ekf = all(s.ekf is not None for s in summaries)
    return RunSummary(
        odo=reduce_errors([s.odo for s in summaries]),
        ekf=reduce_errors([s.ekf for s in summaries]) if has_ekf else None,
    )


def monte_carlo(cfg: ScenarioConfig, out_dir: str | Path | None = None) -> MonteCarloResult:
    """Run every configured seed and aggregate the summaries.

    With ``out_dir`` set, each run's trajectory CSV is written there and its
    summary is recomputed from the emitted file, so published metrics always
    match the published logs. Failed seeds are reported, not fatal, and the
    aggregates cover the successes.
    """
    per_seed: list[tuple[int, RunSummary]] = []
    failures: list[tuple[int, str]] = []
    for seed in sorted(cfg.seeds):
        try:
            log = run_scenario(cfg, seed)
            if out_dir is not None:
                path = Path(out_dir) / f"trajectory_{seed}.csv"
                write_log_csv(log, path)
                log = read_log_csv(path)
            per_seed.append((seed, compute_metrics(log)))
        except Exception as exc:  # noqa: BLE001 - per-seed failures are reported
            failures.append((seed, str(exc)))
    if not per_seed:
        raise RuntimeError(f"every seed failed: {failures}")
    summaries = [s for _, s in per_seed]
    return MonteCarloResult(
        per_seed=tuple(per_seed),
        median=_aggregate(summaries, np.median),
        mean=_aggregate(summaries, np.mean),
        failures=tuple(failures),
    )
