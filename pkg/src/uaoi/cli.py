"""Command-line entry point: ``uaoi {solve,simulate,sweep,compare}``."""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .config import ConfigError, ExperimentConfig
from .errors import InfeasibleError, IterationLimitError, NonBracketingError
from . import experiments


def build_parser():
    parser = argparse.ArgumentParser(
        prog="uaoi",
        description="Optimal waiting policies for urgency-aware AoI in a wirelessly powered sensor.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--seed", type=int, help="base random seed (overrides config)")
    common.add_argument("--out", help="output path (overrides config)")
    common.add_argument(
        "--set", action="append", default=[], metavar="KEY=VALUE", help="override a config entry"
    )
    common.add_argument("-v", "--verbose", action="store_true")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="compute the optimal policy")
    sub.add_parser("simulate", parents=[common], help="Monte Carlo run of the configured policy")
    sweep = sub.add_parser("sweep", parents=[common], help="sweep one parameter and emit CSV")
    sweep.add_argument("--points", type=int, help="number of evenly spaced sweep points")
    sweep.add_argument("--parallel", type=int, default=1, help="worker processes")
    sweep.add_argument(
        "--gnuplot", action="store_true", help="also write <out stem>.dat and <out stem>.gp"
    )
    sub.add_parser("compare", parents=[common], help="optimal vs zero-wait vs equal-wait")
    return parser


def load_config(args):
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    cfg = cfg.with_overrides(args.set)
    if args.seed is not None:
        cfg = cfg.replace(seed=args.seed)
    if args.out is not None:
        cfg = cfg.replace(out=args.out)
    return cfg


def _write(text, path):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = load_config(args)
        if args.command == "solve":
            _, report = experiments.run_solve(cfg)
            sys.stdout.write(report)
        elif args.command == "simulate":
            _, _, report = experiments.run_simulate(cfg)
            sys.stdout.write(report)
        elif args.command == "sweep":
            csv_text = experiments.run_sweep(cfg, points=args.points, parallel=args.parallel)
            _write(csv_text, cfg.out)
            if args.gnuplot:
                stem = os.path.splitext(cfg.out)[0] if cfg.out else "sweep"
                data, script = experiments.gnuplot_files(csv_text, os.path.basename(stem))
                _write(data, stem + ".dat")
                _write(script, stem + ".gp")
        elif args.command == "compare":
            _, ok, report = experiments.run_compare(cfg)
            sys.stdout.write(report)
            if not ok:
                return 3
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("hint: raise M or rho, or allow a longer maximum wait T", file=sys.stderr)
        return 2
    except (ConfigError, NonBracketingError, IterationLimitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
