"""Command-line interface.

Subcommands: ``simulate`` (one trial, optional frame dump), ``sweep``
(parameter grid to CSV), ``verify`` (theorem suites), ``plot`` (CSV to SVG
scatter).  Exit codes: 0 success, 1 verification counterexample, 2
configuration error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .. import engine
from ..dynamics import SimParams
from . import render, sweep as sweep_mod, verify as verify_mod
from .config import ConfigError, HarnessConfig, parse_config


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grmsim",
        description="Deterministic multi-agent simulator for GRM and "
                    "looming collision avoidance")
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", help="run one trial")
    simulate.add_argument("--config", type=Path, help="key = value config file")
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--out", type=Path, help="directory for frame dumps")
    simulate.add_argument("--log-trajectories", action="store_true")
    simulate.add_argument("--stride", type=int, default=100,
                          help="steps between dumped frames")

    sweep = sub.add_parser("sweep", help="run a parameter-grid sweep")
    sweep.add_argument("--config", type=Path, required=True,
                       help="config file with sweep grid keys")
    sweep.add_argument("--out", type=Path, required=True, help="CSV output path")
    sweep.add_argument("--trials", type=int, help="override trials per cell")
    sweep.add_argument("--workers", type=int, help="worker processes")

    verify = sub.add_parser("verify", help="run the theorem verification suites")
    verify.add_argument("--samples", type=int, default=1000)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--out", type=Path, help="report output path")

    plot = sub.add_parser("plot", help="render a sweep CSV as an SVG scatter")
    plot.add_argument("csv", type=Path, help="sweep CSV produced by `sweep`")
    plot.add_argument("--out", type=Path, required=True, help="SVG output path")
    plot.add_argument("--bar-glyph", action="store_true",
                      help="tilt a bar by each cell's CVA")
    return parser


def _load_config(path) -> HarnessConfig:
    if path is None:
        return HarnessConfig(params=SimParams(), grid=None, workers=None)
    return parse_config(path)


def _cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    log = args.log_trajectories or args.out is not None
    result = engine.run_trial(cfg.params, args.seed, log_trajectories=log)
    c, m = result.counts, result.metrics
    fmt = lambda v: "undefined" if v is None else f"{v:.6f}"
    print(f"seed {args.seed}: {cfg.params.horizon_steps} steps, "
          f"{len(result.stops)} stops, {len(result.collisions)} collisions")
    print(f"counts: tp={c.tp} fp={c.fp} tn={c.tn} fn={c.fn}")
    print(f"mobility={fmt(m.mobility)} safety={fmt(m.safety)}")
    if args.out is not None:
        frames = render.emit_frames(result, args.out, stride=args.stride)
        print(f"wrote {len(frames)} frames to {args.out}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    if cfg.grid is None:
        raise ConfigError(f"{args.config}: sweep requires grid keys "
                          "(cva_values_deg, t_grm_values, t_loom_values)")
    grid = cfg.grid
    if args.trials is not None:
        from dataclasses import replace
        grid = replace(grid, trials_per_cell=args.trials).validate()
    workers = args.workers if args.workers is not None else cfg.workers
    table = sweep_mod.run_sweep(grid, cfg.params, workers=workers)
    sweep_mod.emit_csv(table, args.out)
    n_cells = len(table.aggregates)
    print(f"wrote {len(table.rows)} rows ({n_cells} cells) to {args.out}")
    failures = [r for r in table.rows if r.error]
    if failures:
        print(f"warning: {len(failures)} trial(s) failed", file=sys.stderr)
    return 0


def _cmd_verify(args) -> int:
    report = verify_mod.verify_theorems(
        sample_count=args.samples, seed=args.seed, report_path=args.out)
    sys.stdout.write(report.render())
    return 0 if report.passed else 1


def _cmd_plot(args) -> int:
    try:
        table = sweep_mod.parse_csv(args.csv)
    except (OSError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    render.emit_scatter_svg(table.aggregates, args.out, bar_glyph=args.bar_glyph)
    print(f"wrote {args.out}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"simulate": _cmd_simulate, "sweep": _cmd_sweep,
                "verify": _cmd_verify, "plot": _cmd_plot}
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
