"""Command line entry point: `oflpred {sweep,predictor-eval,hst,solve-offline}`."""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import bench
from .errors import ConfigurationError, ValidationError
from .hst import generate_hst_instance, save_hst
from .offline import brute_force, mp_solve
from .predictors import RETRAIN_POLICIES
from .synthetic import COST_MODELS

log = logging.getLogger("oflpred")


def _instance_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("instance")
    g.add_argument("--points", help="euclidean demand points, one 'x y ...' row per demand")
    g.add_argument("--facilities", help="facility rows: coordinates (euclidean) or vertex id, optional cost")
    g.add_argument("--edges", help="graph edge list 'u v w'")
    g.add_argument("--demands", help="graph demand vertex ids, one per line")
    g.add_argument("--synthetic", default="cloud", choices=("cloud", "clusters", "sites"),
                   help="synthetic family used when no input files are given")
    g.add_argument("--n", type=int, default=500, help="synthetic demand count")
    g.add_argument("--clusters", type=int, default=4)
    g.add_argument("--cost-model", choices=COST_MODELS, help="replace facility costs")
    g.add_argument("--cost-levels", type=int, default=4)
    g.add_argument("--cost-base", type=float, default=1.0)


def _run_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--algos", default=",".join(bench.ALGO_NAMES),
                   help="comma separated subset of " + ",".join(bench.ALGO_NAMES))
    p.add_argument("--out", default="-", help="output path ('-' for stdout)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oflpred", description="Online facility location with predictions")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="eta sweep with controlled-error predictions")
    _instance_args(p)
    _run_args(p)
    p.add_argument("--eta", type=float, action="append", help="eta target (repeatable)")
    p.add_argument("--predictions", help="fixed prediction file instead of an eta sweep")

    p = sub.add_parser("predictor-eval", help="train/test split with the simple predictor")
    _instance_args(p)
    _run_args(p)
    p.add_argument("--split", type=float, default=0.3, help="training fraction")
    p.add_argument("--retrain-policy", default="doubling", choices=RETRAIN_POLICIES)

    p = sub.add_parser("hst", help="generate tree lower-bound instances and run the algorithms")
    _run_args(p)
    p.add_argument("--eta", type=float, default=1.0, help="max prediction error, in (0, 1]")
    p.add_argument("--hst-n", type=int, help="target demand count; derives m, h and D")
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--h", type=int, default=4)
    p.add_argument("--save-dir", help="also write the base-seed instance as graph files")

    p = sub.add_parser("solve-offline", help="offline solution as JSON")
    _instance_args(p)
    p.add_argument("--seed", type=int, default=0, help="seed for synthetic instances")
    p.add_argument("--method", default="mp", choices=("mp", "brute"))
    p.add_argument("--out", default="-")
    return parser


def _config(args) -> bench.ExperimentConfig:
    files = any(getattr(args, k, None) for k in ("points", "edges"))
    cfg = bench.ExperimentConfig(source="hst" if args.command == "hst" else ("files" if files else "synthetic"))
    for key in ("points", "facilities", "edges", "demands", "predictions", "synthetic", "n", "clusters",
                "cost_model", "cost_levels", "cost_base", "reps", "seed", "out", "split",
                "retrain_policy", "jobs"):
        if hasattr(args, key):
            setattr(cfg, key, getattr(args, key))
    if hasattr(args, "algos"):
        cfg.algorithms = tuple(a.strip() for a in args.algos.split(",") if a.strip())
    if args.command == "sweep":
        cfg.etas = args.eta or [1.0]
    elif args.command == "hst":
        cfg.etas = [args.eta]
        cfg.hst_n, cfg.hst_m, cfg.hst_h = args.hst_n, args.m, args.h
    return cfg.validate()


def _solve_offline(args, cfg) -> str:
    inst = bench.build_instance(cfg)
    sol = mp_solve(inst) if args.method == "mp" else brute_force(inst)
    doc = {"instance": inst.name, "method": args.method, "open": list(sol.open_set),
           "cost": sol.cost, "opening_cost": sol.opening_cost, "connection_cost": sol.connection_cost,
           "assignment": [int(f) for f in sol.assignment]}
    return json.dumps(doc, indent=2) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = _config(args)
        if args.command == "sweep":
            text = bench.to_csv(bench.run_experiment(cfg))
        elif args.command == "predictor-eval":
            text = bench.to_csv(bench.run_predictor_eval(cfg), bench.TABLE_COLUMNS)
        elif args.command == "hst":
            if args.save_dir:
                paths = save_hst(generate_hst_instance(bench.hst_spec(cfg)), args.save_dir)
                log.info("wrote %s", ", ".join(str(p) for p in paths.values()))
            text = bench.to_csv(bench.run_hst(cfg))
        else:
            text = _solve_offline(args, cfg)
        bench.write_output(text, args.out)
    except (ConfigurationError, ValidationError, OSError) as exc:
        print(f"oflpred: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
