"""Command-line front end: ``quasarppa {solve,prox,certify,table,trace,bounds}``.

Every subcommand accepts ``--config FILE`` (a JSON object of flag values;
explicit flags win) and, where randomness is involved, ``--seed`` (default
from the ``QUASARPPA_SEED`` environment variable, else 0).

Exit codes for ``solve``: 0 converged, 1 bad input, 2 stopped without
converging (iteration cap, stall or prox failure), 3 diverged.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import replace

import numpy as np

from . import checker
from .core import BoxConstraint, DomainError, ParameterError, QuasarCertificate
from .experiments import ExperimentPlan, dump_report, emit_tables, emit_traces, run_plan
from .functions import (
    RandomFamilyParams,
    ces_objective,
    euclid_objective,
    leontief_objective,
    lp_objective,
    make_example,
    quadratic_objective,
    sqrt_abs_objective,
)
from .ppa import PpaConfig, run_ppa
from .prox import ProxConfig, prox
from .ssn import SsnConfig, run_ssn

SCHEMA_VERSION = 1
EXIT_OK, EXIT_BAD_INPUT, EXIT_CAP, EXIT_DIVERGED = 0, 1, 2, 3
FUNCTIONS = ("quadratic", "lp", "ces", "leontief", "euclid", "sqrt_abs", "ex1", "ex2")


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Report usage errors through the exit-code contract (1) instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(message)


def _default_seed() -> int:
    try:
        return int(os.environ.get("QUASARPPA_SEED", "0"))
    except ValueError:
        raise CliError("QUASARPPA_SEED must be an integer")


def _add_function_flags(p):
    g = p.add_argument_group("objective")
    src = g.add_mutually_exclusive_group()
    src.add_argument("--fn", choices=FUNCTIONS, help="gallery function")
    src.add_argument("--instance", help="instance JSON file (example1/example2 schema)")
    g.add_argument("--dim", type=int, default=2)
    g.add_argument("--p", type=float, default=0.5, help="lp exponent")
    g.add_argument("--alpha", type=float, default=1.0, help="homogeneity degree (euclid, leontief)")
    g.add_argument("--ces-beta", type=float, default=1.0)
    g.add_argument("--weights", type=float, nargs="+", help="CES / Leontief weights")
    g.add_argument("--scale", type=float, default=1.0, help="quadratic scale")
    g.add_argument("--N", type=int, default=5, help="trigonometric terms (ex1/ex2)")
    g.add_argument("--q1", type=float, default=1.0)
    g.add_argument("--q2", type=float, default=2.0)
    g.add_argument("--q", type=float, default=2.0)
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--coords", choices=("normalized", "raw"), default="normalized")


def _seed_flag(p):
    p.add_argument("--seed", type=int, default=None)


def build_parser() -> tuple:
    parser = _Parser(prog="quasarppa", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON file of flag values")
    # also accepted after the subcommand; SUPPRESS keeps a top-level value
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON file of flag values")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    p = sub.add_parser("solve", parents=[common], help="run PPA or SSN on one objective")
    _add_function_flags(p)
    _seed_flag(p)
    p.add_argument("--x0", type=float, nargs="+")
    p.add_argument("--solver", choices=("ppa", "ssn"), default="ppa")
    p.add_argument("--beta", type=float, default=0.05)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-iter", type=int, default=30_000)
    p.add_argument("--n-starts", type=int, default=5)
    p.add_argument("--trace-out", help="write the trace CSV here")
    p.add_argument("--summary-out", help="write the JSON summary here instead of stdout")
    subs["solve"] = p

    p = sub.add_parser("prox", parents=[common], help="evaluate one proximity operator")
    _add_function_flags(p)
    _seed_flag(p)
    p.add_argument("--z", type=float, nargs="+", required=False)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--n-starts", type=int, default=5)
    p.add_argument("--lower", type=float, help="box lower bound (all coordinates)")
    p.add_argument("--upper", type=float, help="box upper bound (all coordinates)")
    subs["prox"] = p

    p = sub.add_parser("certify", parents=[common], help="sample the quasar-convexity inequalities")
    _add_function_flags(p)
    _seed_flag(p)
    p.add_argument("--kappa", type=float, required=False)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--xbar", type=float, nargs="+")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--radius", type=float, default=1.0)
    subs["certify"] = p

    p = sub.add_parser("table", parents=[common], help="PPA vs SSN success table on a random family")
    _seed_flag(p)
    p.add_argument("--example", type=int, choices=(1, 2), default=1)
    p.add_argument("--instances", type=int, default=50)
    p.add_argument("--Ns", type=int, nargs="+", default=[2, 5, 10, 20])
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out", help="write the table here instead of stdout")
    p.add_argument("--json-out", help="write the full per-instance report here")
    p.add_argument("--workers", type=int, default=1)
    subs["table"] = p

    p = sub.add_parser("trace", parents=[common], help="write per-iteration CSV traces for chosen instances")
    _seed_flag(p)
    p.add_argument("--example", type=int, choices=(1, 2), default=1)
    p.add_argument("--N", type=int, default=5)
    p.add_argument("--index", type=int, nargs="+", default=[0])
    p.add_argument("--instances", type=int, default=50)
    p.add_argument("--outdir", default="traces")
    subs["trace"] = p

    p = sub.add_parser("bounds", parents=[common], help="print the linear rate and iteration bounds")
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--beta-lower", type=float, default=0.05)
    p.add_argument("--beta-upper", type=float)
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--dist0", type=float, default=1.0)
    p.add_argument("--gap0", type=float)
    subs["bounds"] = p
    return parser, subs


def parse_args(argv=None) -> argparse.Namespace:
    parser, subs = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                config = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read config: {exc}")
        if not isinstance(config, dict):
            raise CliError("config must be a JSON object")
        sp = subs[args.command]
        known = {a.dest for a in sp._actions}
        unknown = set(config) - known
        if unknown:
            raise CliError(f"unknown config keys: {sorted(unknown)}")
        sp.set_defaults(**config)
        args = parser.parse_args(argv)
    if hasattr(args, "seed") and args.seed is None:
        args.seed = _default_seed()
    return args


# ---------------------------------------------------------------------------


def build_objective(args):
    """Objective plus its known minimizer (or None) from the function flags."""
    if args.instance:
        try:
            with open(args.instance, encoding="utf-8") as fh:
                params = RandomFamilyParams.from_json(json.load(fh))
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            raise CliError(f"cannot read instance: {exc}")
        return make_example(params), np.zeros(2), params
    name = args.fn
    if name is None:
        raise CliError("one of --fn or --instance is required")
    d = args.dim
    w = args.weights if args.weights else [1.0] * d
    if name == "quadratic":
        return quadratic_objective(d, args.scale), np.zeros(d), None
    if name == "lp":
        return lp_objective(args.p, d), np.zeros(d), None
    if name == "ces":
        return ces_objective(w, args.ces_beta), np.zeros(len(w)), None
    if name == "leontief":
        return leontief_objective(w, args.alpha), np.zeros(len(w)), None
    if name == "euclid":
        return euclid_objective(args.alpha, d), np.zeros(d), None
    if name == "sqrt_abs":
        return sqrt_abs_objective(), np.zeros(1), None
    example = "example1" if name == "ex1" else "example2"
    params = RandomFamilyParams.draw(example, args.N, args.seed, q1=args.q1, q2=args.q2,
                                     q=args.q, k=args.k, coords=args.coords)
    return make_example(params), np.zeros(2), params


def _emit(text, path=None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=1, default=lambda o: np.asarray(o).tolist()) + "\n"


def cmd_solve(args) -> int:
    f, xbar, params = build_objective(args)
    if args.x0 is not None:
        x0 = np.array(args.x0, dtype=float)
    elif params is not None:
        x0 = params.start_point()
    else:
        raise CliError("--x0 is required for gallery functions")
    if x0.size != f.dim:
        raise CliError(f"--x0 needs {f.dim} entries")
    if args.solver == "ppa":
        cfg = PpaConfig(args.beta, outer_tol=args.tol, max_outer_iter=args.max_iter,
                        prox_cfg=ProxConfig(n_starts=args.n_starts, seed=args.seed))
        tr = run_ppa(f, x0, cfg, xbar)
    else:
        tr = run_ssn(f, x0, SsnConfig(tol=args.tol, max_iter=args.max_iter), xbar)
    if args.trace_out:
        tr.write_csv(args.trace_out)
    summary = {
        "schema_version": SCHEMA_VERSION, "solver": args.solver, "objective": f.name,
        "x0": x0.tolist(), "final_point": tr.final_point.tolist(),
        "final_value": None if math.isnan(tr.final_value) else tr.final_value,
        "iterations": tr.n_iter, "terminated_by": tr.terminated_by, "converged": tr.converged,
    }
    _emit(_json(summary), args.summary_out)
    if tr.converged:
        return EXIT_OK
    return EXIT_DIVERGED if tr.terminated_by == "diverged" else EXIT_CAP


def cmd_prox(args) -> int:
    f, _, _ = build_objective(args)
    if args.lower is not None or args.upper is not None:
        lo = -np.inf if args.lower is None else args.lower
        hi = np.inf if args.upper is None else args.upper
        f = replace(f, box=BoxConstraint.interval(lo, hi, f.dim))
    if args.z is None or len(args.z) != f.dim:
        raise CliError(f"--z needs {f.dim} entries")
    res = prox(f, np.array(args.z), ProxConfig(beta=args.beta, n_starts=args.n_starts, seed=args.seed))
    out = {
        "schema_version": SCHEMA_VERSION, "objective": f.name, "z": args.z, "beta": args.beta,
        "converged": res.converged,
        "minimizers": [{"point": m.point.tolist(), "objective_value": m.objective_value,
                        "residual_norm": m.residual_norm, "source": m.source} for m in res.minimizers],
    }
    _emit(_json(out))
    return EXIT_OK if res.converged else EXIT_CAP


def cmd_certify(args) -> int:
    f, xbar0, _ = build_objective(args)
    if args.kappa is None:
        raise CliError("--kappa is required")
    xbar = np.array(args.xbar) if args.xbar else xbar0
    cert = QuasarCertificate(args.kappa, args.gamma, xbar)
    sampler = checker.ball_sampler(xbar, args.radius, f.box)
    reports = [
        checker.check_quasar_inequality(f, cert, sampler, args.samples, args.seed),
        checker.check_quadratic_growth(f, cert, sampler, args.samples, args.seed),
        checker.check_diff_characterization(f, cert, sampler, args.samples, args.seed),
    ]
    out = {"schema_version": SCHEMA_VERSION, "objective": f.name,
           "reports": [r.to_json() for r in reports]}
    _emit(_json(out))
    return EXIT_OK


def _plan(args, N_values):
    example = f"example{args.example}"
    return ExperimentPlan(example, tuple(N_values), args.instances, args.seed,
                          workers=getattr(args, "workers", 1))


def cmd_table(args) -> int:
    report = run_plan(_plan(args, args.Ns))
    _emit(emit_tables(report, args.format), args.out)
    if args.json_out:
        _emit(dump_report(report), args.json_out)
    return EXIT_OK


def cmd_trace(args) -> int:
    plan = _plan(args, [args.N])
    for path in emit_traces(plan, args.N, args.index, args.outdir):
        print(path)
    return EXIT_OK


def cmd_bounds(args) -> int:
    out = {"schema_version": SCHEMA_VERSION, "kappa": args.kappa, "gamma": args.gamma,
           "beta_lower": args.beta_lower, "eps": args.eps, "dist0": args.dist0}
    if args.gamma > 0:
        out["rate"] = checker.theoretical_rate(args.kappa, args.gamma, args.beta_lower)
        out["iterations_distance"] = checker.iteration_bound_strong(
            args.eps, args.kappa, args.gamma, args.beta_lower, args.dist0)
        out["iterations_value"] = checker.iteration_bound_strong_value(
            args.eps, args.kappa, args.gamma, args.beta_lower, args.dist0, squared=True)
        out["iterations_value_unsquared"] = checker.iteration_bound_strong_value(
            args.eps, args.kappa, args.gamma, args.beta_lower, args.dist0, squared=False)
    else:
        out["iterations_value"] = checker.iteration_bound_quasar(
            args.eps, "value", args.beta_lower, kappa=args.kappa, dist0_or_gap0=args.dist0)
        if args.gap0 is not None:
            upper = args.beta_upper if args.beta_upper is not None else args.beta_lower
            out["iterations_step"] = checker.iteration_bound_quasar(
                args.eps, "step", beta_upper=upper, dist0_or_gap0=args.gap0)
    _emit(_json(out))
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "prox": cmd_prox, "certify": cmd_certify,
            "table": cmd_table, "trace": cmd_trace, "bounds": cmd_bounds}


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args)
    except (CliError, ParameterError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
