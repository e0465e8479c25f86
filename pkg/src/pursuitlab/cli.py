"""Command-line interface: run sweeps, verify RIC values, check the bounds."""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .analysis import landweber_bound_ensemble, ric_exact, tikhonov_bound_ensemble
from .config import parse_config
from .errors import ParseError, PursuitLabError, ValidationError
from .experiment import output_paths, run_experiment, write_csv, write_manifest, write_trials_csv
from .model import gen_gaussian_matrix, gen_sensing_matrix
from .rng import Rng
from .svgplot import write_svg_plots


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pursuitlab")
    parser.add_argument("--version", action="version", version=f"pursuitlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a Monte-Carlo sweep and write CSV/SVG outputs")
    run.add_argument("--config", help="config file (key = value lines); defaults apply when omitted")
    run.add_argument("--out", help="output directory (overrides output_dir)")
    run.add_argument("--seed", type=int, help="master seed (overrides master_seed)")
    run.add_argument("--trials", type=int, help="trials per cell (overrides trials)")
    run.add_argument("--algorithms", help="comma-separated algorithm tokens (overrides algorithms)")
    run.add_argument("--format", choices=("csv", "svg", "both"), default="both")
    run.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                     help="worker processes; 1 runs serially (default: cpu count)")
    run.add_argument("--write-trials", action="store_true", help="also write per-trial records")
    run.add_argument("--quiet", action="store_true", help="suppress progress output")

    ric = sub.add_parser("ric", help="exact restricted isometry constant of a seeded random matrix")
    ric.add_argument("--rows", type=int, required=True)
    ric.add_argument("--cols", type=int, required=True)
    ric.add_argument("--k", type=int, required=True)
    ric.add_argument("--seed", type=int, required=True)
    ric.add_argument("--ensemble", choices=("scaled", "normalized"), default="scaled",
                     help="scaled: N(0, 1/m) entries; normalized: unit-norm columns")

    vb = sub.add_parser("verify-bounds", help="check the regularization error bounds on seeded ensembles")
    vb.add_argument("--which", choices=("tikhonov", "landweber"), required=True)
    vb.add_argument("--seed", type=int, default=42)
    vb.add_argument("--count", type=int, default=100)
    vb.add_argument("--ell-max", type=int, default=100)

    return parser


def _cmd_run(args) -> int:
    overrides = {
        "master_seed": args.seed,
        "trials": args.trials,
        "algorithms": args.algorithms,
        "output_dir": args.out,
    }
    cfg = parse_config(args.config, overrides)
    paths = output_paths(cfg)
    os.makedirs(cfg.output_dir, exist_ok=True)

    def progress(m, snr, n_alg):
        if not args.quiet:
            label = "noise-free" if snr is None else f"{snr:g} dB"
            print(f"cell done: m={m}, snr={label} ({n_alg} algorithms x {cfg.trials} trials)",
                  file=sys.stderr)

    collector: list = []
    try:
        result = run_experiment(
            cfg,
            jobs=max(1, args.jobs),
            retain_trials=args.write_trials,
            progress=progress,
            collector=collector,
        )
    except BaseException:
        if collector:  # flush whatever cells finished
            write_csv(collector, paths["summary"])
            print(f"wrote partial results for {len(collector)} cells to {paths['summary']}",
                  file=sys.stderr)
        raise

    if args.format in ("csv", "both"):
        write_csv(result.summaries, paths["summary"])
        if args.write_trials:
            write_trials_csv(result.trial_records, paths["trials"])
    if args.format in ("svg", "both"):
        write_svg_plots(result.summaries, paths["plot_prefix"])
    write_manifest(cfg, paths["manifest"], __version__)
    if not args.quiet:
        print(f"outputs written to {cfg.output_dir}", file=sys.stderr)
    return 0


def _cmd_ric(args) -> int:
    rng = Rng(args.seed)
    if args.ensemble == "scaled":
        mat = gen_gaussian_matrix(rng, args.rows, args.cols) / np.sqrt(args.rows)
    else:
        mat = gen_sensing_matrix(rng, args.rows, args.cols).mat
    delta = ric_exact(mat, args.k)
    print(f"delta_{args.k} = {delta:.9g}  ({args.rows}x{args.cols} {args.ensemble} ensemble, seed {args.seed})")
    if delta < 1.0:
        bound = float(np.sqrt((1.0 + delta) / (1.0 - delta)))
        print(f"condition bound for k-column submatrices: kappa <= {bound:.9g}")
    return 0


def _cmd_verify_bounds(args) -> int:
    if args.which == "tikhonov":
        checks = tikhonov_bound_ensemble(args.seed, args.count)
        held = sum(1 for c in checks if c.holds)
        worst = max((c.lhs / c.rhs if c.rhs > 0 else 0.0) for c in checks)
        print(f"tikhonov bound: {held}/{len(checks)} instances hold (worst lhs/rhs = {worst:.6f})")
        return 0 if held == len(checks) else 1
    ensembles = landweber_bound_ensemble(args.seed, args.count, args.ell_max)
    total = sum(len(rows) for rows in ensembles)
    held = sum(1 for rows in ensembles for r in rows if r.holds)
    worst = max((r.lhs / r.rhs for rows in ensembles for r in rows if r.rhs > 0), default=0.0)
    print(f"landweber bound: {held}/{total} (instance, ell) pairs hold (worst lhs/rhs = {worst:.6f})")
    return 0 if held == total else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "ric":
            return _cmd_ric(args)
        return _cmd_verify_bounds(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PursuitLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
