"""Command-line entry point.

Verbs:
  run            execute an experiment described by a JSON config file
  compare        tabulate final regrets across run manifests
  check-schedule print the condition report and bounds for given constants
  solve-offline  compute the offline optimum for a stream prefix
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import metrics, offline
from .experiment import ExperimentConfig, build_problem, compare_runs, run_experiment
from .schedules import (ProblemConstants, Regime, ScheduleParams,
                        check_conditions, constraint_regret_bound,
                        loss_regret_bound, schedule_arrays, schedule_sums)


def _cmd_run(args) -> int:
    overrides = {"T": args.T, "beta": args.beta, "output_dir": args.output}
    if args.seeds is not None:
        overrides["seeds"] = [int(s) for s in args.seeds.split(",")]
    cfg = ExperimentConfig.from_file(args.config, **overrides)
    manifest = run_experiment(cfg)
    print(manifest)
    return 0


def _cmd_compare(args) -> int:
    rows = compare_runs(args.manifests, output_path=args.output)
    for row in rows:
        print(json.dumps(row))
    return 0


def _cmd_check_schedule(args) -> int:
    constants = ProblemConstants(R=args.R, G=args.G, D=args.D, F=args.F,
                                 sigma=args.sigma)
    regime = Regime.STRONGLY_CONVEX if args.sigma > 0 and args.regime == "strongly_convex" \
        else Regime.CONVEX
    params = ScheduleParams(beta=args.beta, regime=regime, constants=constants)
    theta, eta, mu = schedule_arrays(params, args.T)
    cond = check_conditions(theta, eta, mu, constants.sigma, constants.G, args.T)
    sums = schedule_sums(params, args.T)
    print(json.dumps({
        "c1_ok": cond.c1_ok,
        "c2_ok": cond.c2_ok,
        "c3_slack": cond.c3_slack,
        "u_eta": sums.u_eta,
        "c3_ok": cond.c3_slack <= sums.u_eta + 1e-9,
        "loss_regret_bound": float(loss_regret_bound(params, args.T)),
        "constraint_regret_bound": float(constraint_regret_bound(params, args.T)),
    }, indent=2))
    return 0


def _cmd_solve_offline(args) -> int:
    cfg = ExperimentConfig.from_file(args.config)
    problem = build_problem(cfg, args.seed)
    problem.materialize(max(args.t, cfg.T), args.seed)
    sol = offline.solve_offline(problem, args.t)
    print(json.dumps({
        "t": args.t,
        "objective": sol.objective,
        "iterations": sol.iterations,
        "tolerance_met": sol.tolerance_met,
        "x_star": np.asarray(sol.x_star).tolist(),
    }))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aogd",
        description="Adaptive online gradient descent with long-term constraints")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment from a JSON config")
    p_run.add_argument("config")
    p_run.add_argument("--output", default=None, help="override output directory")
    p_run.add_argument("--T", type=int, default=None)
    p_run.add_argument("--beta", type=float, default=None)
    p_run.add_argument("--seeds", default=None, help="comma-separated seed list")
    p_run.set_defaults(func=_cmd_run)

    p_cmp = sub.add_parser("compare", help="compare run manifests")
    p_cmp.add_argument("manifests", nargs="+")
    p_cmp.add_argument("--output", default=None, help="CSV output path")
    p_cmp.set_defaults(func=_cmd_compare)

    p_chk = sub.add_parser("check-schedule",
                           help="condition report and bounds for constants")
    p_chk.add_argument("--beta", type=float, required=True)
    p_chk.add_argument("--R", type=float, required=True)
    p_chk.add_argument("--G", type=float, required=True)
    p_chk.add_argument("--D", type=float, required=True)
    p_chk.add_argument("--F", type=float, default=1.0)
    p_chk.add_argument("--sigma", type=float, default=0.0)
    p_chk.add_argument("--T", type=int, required=True)
    p_chk.add_argument("--regime", choices=["convex", "strongly_convex"],
                       default="convex")
    p_chk.set_defaults(func=_cmd_check_schedule)

    p_off = sub.add_parser("solve-offline",
                           help="offline optimum of a stream prefix")
    p_off.add_argument("config")
    p_off.add_argument("--t", type=int, required=True)
    p_off.add_argument("--seed", type=int, default=0)
    p_off.set_defaults(func=_cmd_solve_offline)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # single diagnostic surface for all verbs
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
