"""Command-line harness: run scenarios, summarize logs, project range sweeps.

Exit codes: 0 success, 2 configuration error, 3 runtime or data failure.
"""

import argparse
import sys
from dataclasses import fields
from pathlib import Path

from .config import ConfigError, load_config
from .lrf import load_sweep, sweep_to_cloud, write_cloud
from .metrics import EstimatorErrors, MonteCarloResult, RunSummary, compute_metrics, monte_carlo
from .scenario import read_log_csv, run_scenario, write_log_csv

_METRIC_NAMES = [f.name for f in fields(EstimatorErrors)]


def _fmt(value: float) -> str:
    return f"{value:.9g}"


def _print_summary(summary: RunSummary) -> None:
    for label, errors in (("odo", summary.odo), ("ekf", summary.ekf)):
        if errors is None:
            continue
        parts = " ".join(f"{name}={_fmt(value)}" for name, value in errors.as_dict().items())
        print(f"{label}: {parts}")


def _summary_csv_row(tag: str, summary: RunSummary) -> str:
    cells = [tag]
    for errors in (summary.odo, summary.ekf):
        if errors is None:
            cells += [""] * len(_METRIC_NAMES)
        else:
            cells += [_fmt(getattr(errors, name)) for name in _METRIC_NAMES]
    return ",".join(cells)


def _summary_csv(result: MonteCarloResult) -> str:
    header = ["seed"]
    header += [f"odo_{name}" for name in _METRIC_NAMES]
    header += [f"ekf_{name}" for name in _METRIC_NAMES]
    lines = [",".join(header)]
    for seed, summary in result.per_seed:
        lines.append(_summary_csv_row(str(seed), summary))
    lines.append(_summary_csv_row("median", result.median))
    lines.append(_summary_csv_row("mean", result.mean))
    return "".join(line + "\n" for line in lines)


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    seed = args.seed if args.seed is not None else cfg.seeds[0]
    log = run_scenario(cfg, seed)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"trajectory_{seed}.csv"
    write_log_csv(log, path)
    print(f"wrote {path}")
    _print_summary(compute_metrics(read_log_csv(path)))
    return 0


def _cmd_metrics(args: argparse.Namespace) -> int:
    _print_summary(compute_metrics(read_log_csv(args.log)))
    return 0


def _cmd_montecarlo(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    out_dir = None
    if args.out is not None:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
    result = monte_carlo(cfg, out_dir=out_dir)
    for seed, message in result.failures:
        print(f"seed {seed} failed: {message}", file=sys.stderr)
    table = _summary_csv(result)
    if out_dir is not None:
        summary_path = out_dir / "montecarlo_summary.csv"
        summary_path.write_text(table, encoding="utf-8")
        print(f"wrote {summary_path}")
    else:
        print(table, end="")
    return 0


def _cmd_lrf_project(args: argparse.Namespace) -> int:
    sweep = load_sweep(args.sweep)
    points, rejected = sweep_to_cloud(sweep)
    write_cloud(points, args.cloud)
    print(f"rejected {rejected} sample(s)", file=sys.stderr)
    print(f"wrote {args.cloud} ({len(points)} points)")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="diffdrive-ekf",
        description="Differential-drive localization scenarios and range-scan projection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one scenario and write its trajectory CSV")
    p_sim.add_argument("config", help="scenario config file")
    p_sim.add_argument("--seed", type=int, default=None, help="override the first config seed")
    p_sim.add_argument("--out", default=".", help="output directory (default: cwd)")
    p_sim.set_defaults(func=_cmd_simulate)

    p_met = sub.add_parser("metrics", help="summarize a trajectory CSV")
    p_met.add_argument("log", help="trajectory CSV path")
    p_met.set_defaults(func=_cmd_metrics)

    p_mc = sub.add_parser("montecarlo", help="run all configured seeds and aggregate")
    p_mc.add_argument("config", help="scenario config file")
    p_mc.add_argument("--out", default=None, help="directory for per-seed CSVs and the summary")
    p_mc.set_defaults(func=_cmd_montecarlo)

    p_lrf = sub.add_parser("lrf-project", help="project a sweep file to a point-cloud file")
    p_lrf.add_argument("sweep", help="input: one 'alpha_deg beta_deg range_m' line per beam")
    p_lrf.add_argument("cloud", help="output: one 'x y z' line per point")
    p_lrf.set_defaults(func=_cmd_lrf_project)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
