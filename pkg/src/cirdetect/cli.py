"""Command line interface.

Subcommands: simulate, estimate, test, changepoint, experiment.  Results
are printed as JSON on stdout.  Exit codes: 0 success, 1 user error (bad
arguments, malformed input files, degenerate data), 2 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .changepoint import estimate_change_point
from .decision import TestSpec, run_test
from .errors import CirError
from .estimator import lse_full
from .harness import (
    ExperimentConfig,
    read_path_csv,
    run_experiment,
    write_path_csv,
)
from .model import CirParams
from .pathfun import compute_functionals
from .sampler import ChangeScenario, simulate_change_path, simulate_path
from .testprocess import raw_score, test_trajectory

import numpy as np


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the contract reserves 2 for
    # internal failures, so remap to 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _x0_value(text: str):
    if text == "stationary":
        return text
    return float(text)


def _build_parser() -> _Parser:
    parser = _Parser(prog="cirdetect", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="simulate a path and write it as CSV")
    p_sim.add_argument("--a", type=float, required=True)
    p_sim.add_argument("--b", type=float, required=True)
    p_sim.add_argument("--sigma", type=float, required=True)
    p_sim.add_argument("--x0", type=_x0_value, default="stationary",
                       help="initial value, or 'stationary' (default)")
    p_sim.add_argument("--t-end", type=float, required=True)
    p_sim.add_argument("--dt", type=float, default=0.01)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--out", required=True, help="output CSV path")
    p_sim.add_argument("--a-post", type=float, default=None,
                       help="post-change a (with --b-post and --rho)")
    p_sim.add_argument("--b-post", type=float, default=None)
    p_sim.add_argument("--rho", type=float, default=None,
                       help="change point as a fraction of t-end")

    p_est = sub.add_parser("estimate", help="drift and volatility estimates from a CSV path")
    p_est.add_argument("--path", required=True)
    p_est.add_argument("--sigma-sq", type=float, default=None,
                       help="known sigma^2; recovered from the path if omitted")

    p_test = sub.add_parser("test", help="run a change test on a CSV path")
    p_test.add_argument("--path", required=True)
    p_test.add_argument("--param", choices=("a", "b", "both"), default="both")
    p_test.add_argument("--side", choices=("upper", "lower", "two"), default="two")
    p_test.add_argument("--alpha", type=float, default=0.05)
    p_test.add_argument("--sigma-sq", type=float, default=None)
    p_test.add_argument("--grid-m", type=int, default=None)
    p_test.add_argument("--emit-trajectory", default=None,
                        help="write the trajectory as t,score_a,score_b CSV")

    p_cp = sub.add_parser("changepoint", help="locate a change point on a CSV path")
    p_cp.add_argument("--path", required=True)
    p_cp.add_argument("--param", choices=("a", "b"), required=True)
    p_cp.add_argument("--direction", choices=("up", "down"), required=True)
    p_cp.add_argument("--sigma-sq", type=float, default=None)

    p_exp = sub.add_parser("experiment", help="run a Monte Carlo experiment")
    p_exp.add_argument("--config", required=True, help="JSON config file")
    p_exp.add_argument("--seed", type=int, default=None, help="override master_seed")
    p_exp.add_argument("--out", default=None, help="write the JSON report here")
    p_exp.add_argument("--per-rep", default=None,
                       help="write per-replication records as CSV")
    p_exp.add_argument("--jobs", type=int, default=1)

    return parser


def _cmd_simulate(args) -> dict:
    params = CirParams(args.a, args.b, args.sigma)
    rng = np.random.default_rng(args.seed)
    change_opts = (args.a_post, args.b_post, args.rho)
    if any(v is not None for v in change_opts):
        if any(v is None for v in change_opts):
            raise CirError("--a-post, --b-post and --rho must be given together")
        scenario = ChangeScenario(
            a_pre=args.a,
            b_pre=args.b,
            a_post=args.a_post,
            b_post=args.b_post,
            sigma=args.sigma,
            rho=args.rho,
            horizon=args.t_end,
        )
        cp = simulate_change_path(scenario, args.x0, args.dt, rng)
        write_path_csv(args.out, cp.path)
        return {
            "out": args.out,
            "points": len(cp.path),
            "dt": args.dt,
            "t_end": cp.path.t_end,
            "change_index": cp.change_index,
            "tau_grid": cp.tau_grid,
            "tau_true": cp.tau_true,
        }
    path = simulate_path(params, args.x0, args.t_end, args.dt, rng)
    write_path_csv(args.out, path)
    return {"out": args.out, "points": len(path), "dt": args.dt, "t_end": path.t_end}


def _functionals_from_args(args):
    path = read_path_csv(args.path)
    sigma_sq = "auto" if args.sigma_sq is None else args.sigma_sq
    return compute_functionals(path, sigma_sq)


def _cmd_estimate(args) -> dict:
    fn = _functionals_from_args(args)
    theta = lse_full(fn)
    return {
        "a_hat": theta.a_hat,
        "b_hat": theta.b_hat,
        "sigma_sq_hat": fn.sigma_sq,
        "det_q": theta.det_q,
    }


def _decision_dict(dec) -> dict:
    return {
        "parameter": dec.parameter,
        "side": dec.side,
        "alpha": dec.alpha,
        "component": dec.component,
        "statistic": dec.statistic,
        "critical_value": dec.critical_value,
        "p_value": dec.p_value,
        "reject": dec.reject,
    }


def _cmd_test(args) -> dict:
    fn = _functionals_from_args(args)
    traj = test_trajectory(fn, args.grid_m)
    if args.emit_trajectory:
        with open(args.emit_trajectory, "w") as f:
            f.write("t,score_a,score_b\n")
            for t, (sa, sb) in zip(traj.t_grid, traj.values):
                f.write(f"{float(t)!r},{float(sa)!r},{float(sb)!r}\n")
    outcome = run_test(traj, TestSpec(args.param, args.side, args.alpha))
    if isinstance(outcome, tuple):
        return {"decisions": [_decision_dict(d) for d in outcome]}
    return _decision_dict(outcome)


def _cmd_changepoint(args) -> dict:
    fn = _functionals_from_args(args)
    raw = raw_score(fn, lse_full(fn))
    component = 1 if args.param == "a" else 2
    est = estimate_change_point(raw, component, args.direction)
    return {
        "parameter": args.param,
        "component": est.component,
        "direction": est.direction,
        "tau_hat": est.tau_hat,
        "achieved_value": est.achieved_value,
    }


def _cmd_experiment(args) -> dict:
    with open(args.config) as f:
        raw_cfg = json.load(f)
    if args.seed is not None:
        raw_cfg["master_seed"] = args.seed
    config = ExperimentConfig.from_dict(raw_cfg)
    report = run_experiment(
        config, n_jobs=args.jobs, keep_per_rep=args.per_rep is not None
    )
    if args.per_rep:
        report.write_per_rep_csv(args.per_rep)
    out = args.out or config.out
    if out:
        with open(out, "w") as f:
            f.write(report.to_json() + "\n")
    return report.to_dict()


_COMMANDS = {
    "simulate": _cmd_simulate,
    "estimate": _cmd_estimate,
    "test": _cmd_test,
    "changepoint": _cmd_changepoint,
    "experiment": _cmd_experiment,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code or 0
    try:
        result = _COMMANDS[args.command](args)
    except (CirError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(result, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
