"""Command-line entry point ``gls``."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import bounds as B
from .generating import from_config
from .harness.fixtures import fixture, fixtures, random_scenario
from .harness.report import fmt, run_report, to_csv
from .harness.scenario import load_scenarios
from .harness.verify import MODES, hammerstein_factors
from .instance import load_instance
from .norms import PGrid, gls_sup, lp_norm
from .operators import hammerstein_apply, nemytskii_apply, urysohn_apply

THEOREMS = ("2.1", "3.1", "4.1")


def _exponent(text: str) -> float:
    return float("inf") if text.strip().lower() in ("inf", "infinity") else float(text)


def cmd_norm(args) -> int:
    inst = load_instance(args.instance)
    print(fmt(lp_norm(inst.function(args.function), _exponent(args.p))))
    return 0


def cmd_glsnorm(args) -> int:
    inst = load_instance(args.instance)
    f = inst.function(args.function)
    psi = from_config(args.psi, inst.resolve, default_of=f)
    res = gls_sup(f, psi, PGrid(n=args.grid))
    print(fmt(res.value))
    if res.unbounded:
        print(f"warning: ratio still rising at p = {PGrid().p_max:g}; the norm may be larger", file=sys.stderr)
    return 0


def cmd_apply(args) -> int:
    inst = load_instance(args.instance)
    g = inst.function(args.g)
    if args.op == "nemytskii":
        out = nemytskii_apply(inst.map(args.map), g)
    elif args.op == "urysohn":
        if not args.space:
            raise SystemExit("urysohn needs --space (the output space X)")
        out = urysohn_apply(inst.map(args.map), g, inst.space(args.space))
    else:
        if not args.kernel:
            raise SystemExit("hammerstein needs --kernel")
        out = hammerstein_apply(inst.kernel(args.kernel), inst.map(args.map), g)
    print(",".join(fmt(v) for v in out.values))
    return 0


def _bound_table(scen, theorem, r_grid, mode):
    if theorem == "2.1":
        sec, inst, beta = scen.section("nemytskii"), scen.instance, scen.beta_for("nemytskii")
        g, phi = inst.function(sec["g"]), inst.function(sec["phi"])
        psi = from_config(sec.get("psi", "constant:1"), inst.resolve, default_of=g)
        nu = from_config(sec.get("nu", "constant:1"), inst.resolve, default_of=phi)
        return B.nemytskii_table(psi, nu, beta, r_grid)
    if theorem == "3.1":
        sec, inst, beta = scen.section("urysohn"), scen.instance, scen.beta_for("urysohn")
        g = inst.function(sec["g"])
        psi = from_config(sec.get("psi", "constant:1"), inst.resolve, default_of=g)
        return B.urysohn_table(psi, inst.kernel(sec["u0"]), beta, r_grid)
    return B.hammerstein_table(hammerstein_factors(scen, mode), r_grid)


def cmd_bound(args) -> int:
    scen = load_scenarios(args.scenario)[0]
    r_grid = args.r_grid or scen.r_grid
    table = _bound_table(scen, args.theorem, r_grid, args.mode)
    two = table.arg_t is not None
    print("r,bound,arg_p" + (",arg_t" if two else "") + ",finite")
    for i in range(len(table)):
        cols = [table.r[i], table.value[i], table.arg_p[i]] + ([table.arg_t[i]] if two else [])
        print(",".join(fmt(c) for c in cols) + "," + fmt(bool(np.isfinite(table.value[i]))))
    return 0


def cmd_verify(args) -> int:
    scenarios = load_scenarios(args.scenario) if args.scenario else fixtures()
    for s in scenarios:
        s.seed = args.seed
    scenarios += [random_scenario(args.seed + i) for i in range(args.random)]
    theorems = THEOREMS if args.theorem == "all" else (args.theorem,)
    reports, status, texts = run_report(scenarios, theorems, args.out, (args.format,) if args.out else ())
    if args.out is None:
        sys.stdout.write(texts[args.format])
    return status


def cmd_example(args) -> int:
    name = {"2.1": "example-2.1", "3.1-remark": "remark-3.1", "4.1-ones": "all-ones-4.1"}[args.name]
    reports, status, texts = run_report([fixture(name)])
    sys.stdout.write(texts["md"])
    for rep in reports:
        print(f"{rep.scenario} [{rep.mode}]: lhs = {fmt(rep.lhs_gls)}, rhs = {fmt(rep.rhs_gls)}, "
              f"relative gap = {fmt(rep.gls_gap)}")
    return status


def cmd_fuzz(args) -> int:
    scenarios = [random_scenario(args.seed + i) for i in range(args.count)]
    theorems = THEOREMS if args.theorem == "all" else (args.theorem,)
    reports, status, texts = run_report(scenarios, theorems, args.out, (args.format,) if args.out else ())
    if args.out is None:
        sys.stdout.write(texts["md"] if args.format == "md" else to_csv(reports))
    return status


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gls", description="Grand Lebesgue Space norms and operator bounds.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", help="Lebesgue-Riesz norm of a function")
    p.add_argument("--instance", required=True)
    p.add_argument("--function", required=True)
    p.add_argument("--p", required=True, help="exponent >= 1 or 'inf'")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("glsnorm", help="Grand Lebesgue norm against a generating function")
    p.add_argument("--instance", required=True)
    p.add_argument("--function", required=True)
    p.add_argument("--psi", required=True, help="e.g. constant:1, power:1, natural:f@1:inf or JSON")
    p.add_argument("--grid", type=int, default=200)
    p.set_defaults(func=cmd_glsnorm)

    p = sub.add_parser("apply", help="apply an operator and print the output vector")
    p.add_argument("--op", choices=("nemytskii", "urysohn", "hammerstein"), required=True)
    p.add_argument("--instance", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--map", required=True, help="label of n (or u for urysohn)")
    p.add_argument("--kernel", help="label of h (hammerstein)")
    p.add_argument("--space", help="output space X (urysohn)")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("bound", help="tabulate W, theta or Delta over an r-grid")
    p.add_argument("--theorem", choices=THEOREMS, required=True)
    p.add_argument("--scenario", required=True)
    p.add_argument("--r-grid", dest="r_grid", help="geom:lo:hi:n or lin:lo:hi:n")
    p.add_argument("--mode", choices=MODES, default="raw", help="Delta mode (4.1 only)")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="verify theorems on scenarios (default: built-in fixtures)")
    p.add_argument("--theorem", choices=THEOREMS + ("all",), default="all")
    p.add_argument("--scenario")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random", type=int, default=0, help="append this many seeded random scenarios")
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "md"), default="csv")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("example", help="run a built-in exactness fixture")
    p.add_argument("name", choices=("2.1", "3.1-remark", "4.1-ones"))
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("fuzz", help="verify seeded random scenarios")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--theorem", choices=THEOREMS + ("all",), default="all")
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "md"), default="md")
    p.set_defaults(func=cmd_fuzz)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"gls: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
