"""Batch experiment runner.

Subcommands:
  validate  - cross-check every analytic quantity against the Monte-Carlo
              oracle over a gamma grid
  analyze   - evaluate the analytic probabilities and the full rate table
  simulate  - Monte-Carlo estimates only, with an optional raw SIR dump
  optimize  - run the gradient-projection EE maximizer for one scheme
  compare   - EE of both schemes and all baselines over a parameter sweep

All outputs are CSV files plus a JSON "plot manifest" describing column
roles.  Exit codes: 0 success, 1 validation failure, 2 numeric
non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from svcache import analytic, montecarlo
from svcache.analytic import QuadratureError
from svcache.baselines import icp_expected_ee, mpcp_policy, ucp_policy
from svcache.config import (NetworkConfig, ContentConfig, PowerCoefficients,
                            CachingPolicy, db_to_linear, load_scenario)
from svcache.objective import ObjectiveContext, ee_value
from svcache.optimizer import (SolverSettings, make_initial_policy, optimize,
                               optimize_best)
from svcache.popularity import build_profile

GAMMA_GRID_DB = (0.0, 5.0, 10.0, 15.0, 20.0)

# 3-sigma windows wider than these are reported as inconclusive rather
# than pass/fail.
_MAX_CONCLUSIVE_SIGMA_PROB = 0.02
_MAX_CONCLUSIVE_SIGMA_REL = 0.02


def _write_csv(path: Path, header: list, rows: list, roles: dict) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    manifest = {"csv": path.name, "schema_version": 1, "columns": roles}
    path.with_suffix(".manifest.json").write_text(json.dumps(manifest, indent=2))


def _load(args):
    if args.config:
        return load_scenario(args.config)
    return NetworkConfig(), ContentConfig(), PowerCoefficients()


def _status(analytic_value, est, scale, rel=False):
    sigma3 = 3.0 * est.std_error
    limit = (_MAX_CONCLUSIVE_SIGMA_REL * scale if rel
             else _MAX_CONCLUSIVE_SIGMA_PROB)
    if est.std_error > limit:
        return "inconclusive"
    return "pass" if abs(analytic_value - est.mean) <= max(sigma3, 0.01 * scale) \
        else "fail"


def cmd_validate(args) -> int:
    net, content, _ = _load(args)
    rows = []
    failed = False
    for gamma_db in GAMMA_GRID_DB:
        gamma = db_to_linear(gamma_db)
        quantities = [
            ("p_success_mbs", analytic.p_success_mbs(net, gamma),
             montecarlo.estimate_p_success_mbs(net, gamma, args.drops, args.seed)),
            ("p_success_sbs_bl", analytic.p_success_sbs_bl(net, gamma, net.n1,
                                                           seed=args.seed),
             montecarlo.estimate_p_success_sbs(net, gamma, "BL", net.n1,
                                               args.drops, args.seed)),
            ("p_success_sbs_el", analytic.p_success_sbs_el(net, gamma, net.n2,
                                                           seed=args.seed),
             montecarlo.estimate_p_success_sbs(net, gamma, "EL", net.n2,
                                               args.drops, args.seed)),
        ]
        for name, value, est in quantities:
            status = _status(value, est, 1.0)
            failed |= status == "fail"
            rows.append([name, gamma_db, value, est.mean, est.std_error, status])
        rate_specs = [
            ("ergodic_rate_mbs", lambda: analytic.ergodic_rate_mbs(net, gamma),
             "MBS", net.n1),
            ("ergodic_rate_sbs_bl",
             lambda: analytic.ergodic_rate_sbs_bl(net, gamma, net.n1,
                                                  seed=args.seed),
             "SBS-BL", net.n1),
            ("ergodic_rate_sbs_el",
             lambda: analytic.ergodic_rate_sbs_el(net, gamma, net.n2,
                                                  seed=args.seed),
             "SBS-EL", net.n2),
        ]
        for name, fn, source, n_serving in rate_specs:
            value = fn()
            try:
                est = montecarlo.estimate_ergodic_rate(
                    net, gamma, source, args.drops, args.seed,
                    n_serving=n_serving)
                status = _status(value, est, value, rel=True)
            except RuntimeError:
                est = montecarlo.Estimate(math.nan, math.inf, 0, args.seed)
                status = "inconclusive"
            failed |= status == "fail"
            rows.append([name, gamma_db, value, est.mean, est.std_error, status])

    out = Path(args.out_dir) / "validate.csv"
    _write_csv(out, ["quantity", "gamma_db", "analytic", "mc_mean",
                     "mc_std_error", "status"],
               rows, {"x": "gamma_db", "series": "quantity",
                      "y": ["analytic", "mc_mean"], "error": "mc_std_error"})
    print(f"wrote {out}")
    return 1 if failed else 0


def cmd_analyze(args) -> int:
    net, content, _ = _load(args)
    rows = []
    for gamma_db in GAMMA_GRID_DB:
        gamma = db_to_linear(gamma_db)
        rows.append(["p_success_mbs", gamma_db,
                     analytic.p_success_mbs(net, gamma)])
        rows.append(["p_success_sbs_bl", gamma_db,
                     analytic.p_success_sbs_bl(net, gamma, net.n1, seed=args.seed)])
        rows.append(["p_success_sbs_el", gamma_db,
                     analytic.p_success_sbs_el(net, gamma, net.n2, seed=args.seed)])
    table = analytic.build_rate_table(net, seed=args.seed)
    rows.append(["rate_mbs_bl_threshold", None, table.r_m_bl])
    rows.append(["rate_mbs_el_threshold", None, table.r_m_el])
    for n, r in table.r_s_bl.items():
        rows.append([f"rate_sbs_bl_n{n}", None, r])
    for n, r in table.r_s_el.items():
        rows.append([f"rate_sbs_el_n{n}", None, r])
    out = Path(args.out_dir) / "analyze.csv"
    _write_csv(out, ["quantity", "gamma_db", "value"],
               rows, {"x": "gamma_db", "series": "quantity", "y": ["value"]})
    print(f"wrote {out}")
    return 0


def cmd_simulate(args) -> int:
    net, content, _ = _load(args)
    rows = []
    for gamma_db in GAMMA_GRID_DB:
        gamma = db_to_linear(gamma_db)
        for name, est in [
            ("p_success_mbs",
             montecarlo.estimate_p_success_mbs(net, gamma, args.drops, args.seed)),
            ("p_success_sbs_bl",
             montecarlo.estimate_p_success_sbs(net, gamma, "BL", net.n1,
                                               args.drops, args.seed)),
            ("p_success_sbs_el",
             montecarlo.estimate_p_success_sbs(net, gamma, "EL", net.n2,
                                               args.drops, args.seed)),
        ]:
            rows.append([name, gamma_db, est.mean, est.std_error, est.n_samples])
    out = Path(args.out_dir) / "simulate.csv"
    _write_csv(out, ["quantity", "gamma_db", "mc_mean", "mc_std_error",
                     "n_samples"],
               rows, {"x": "gamma_db", "series": "quantity", "y": ["mc_mean"],
                      "error": "mc_std_error"})
    print(f"wrote {out}")
    if args.dump:
        dump = Path(args.out_dir) / "sir_drops.txt"
        with open(dump, "w") as fh:
            fh.write("# seed sir_mbs sir_sbs_bl sir_sbs_el\n")
            sir_m = montecarlo.sir_samples_mbs(net, args.drops, args.seed)
            sir_b = montecarlo.sir_samples_sbs_bl(net, net.n1, args.drops,
                                                  args.seed)
            sir_e = montecarlo.sir_samples_sbs_el(net, net.n2, args.drops,
                                                  args.seed)
            for vals in zip(sir_m, sir_b, sir_e):
                fh.write(f"{args.seed} "
                         + " ".join(repr(float(v)) for v in vals) + "\n")
        print(f"wrote {dump}")
    return 0


def _context(args, net, content, coeff):
    table = analytic.build_rate_table(net, seed=args.seed)
    return ObjectiveContext(rates=table, profile=build_profile(content),
                            net=net, content=content, coeff=coeff,
                            theta=args.theta)


def cmd_optimize(args) -> int:
    net, content, coeff = _load(args)
    ctx = _context(args, net, content, coeff)
    mode = "fractional" if args.scheme == 1 else "random"
    if args.init == "ucp":
        initial = ucp_policy(content, mode=mode)
    elif args.init == "mpcp":
        initial = mpcp_policy(content, mode=mode)
    else:
        initial = make_initial_policy(args.init, content, args.seed, mode=mode)
    settings = SolverSettings(max_iters=args.max_iters, rel_tol=args.rel_tol,
                              theta=args.theta, seed=args.seed)
    policy, trace = optimize(initial, ctx, settings)

    out_dir = Path(args.out_dir)
    trace.to_csv(out_dir / "trace.csv")
    rows = [[f + 1, policy.q1[f], policy.q2[f]] for f in range(content.f_count)]
    _write_csv(out_dir / "policy.csv", ["file", "q1", "q2"], rows,
               {"x": "file", "y": ["q1", "q2"]})
    ee = ee_value(policy, ctx)
    print(f"scheme {args.scheme}: EE = {ee:.6g} bits/J, "
          f"termination = {trace.termination}, iterations = {len(trace.rows)}")
    if policy.mode == "fractional":
        print(f"exact-l0 EE = {ee_value(policy, ctx, exact_l0=True):.6g} bits/J")
    return 0


_SWEEPS = {
    "p_s": lambda net, content, v: (replace(net, p_s=v), content),
    "gamma_bl": lambda net, content, v: (replace(net, gamma_bl=v), content),
    "cache_size": lambda net, content, v: (net, replace(content, m_cache=v)),
    "zipf_alpha": lambda net, content, v: (net, replace(content, zipf_alpha=v)),
}


def cmd_compare(args) -> int:
    net0, content0, coeff = _load(args)
    grid = [float(x) for x in args.grid.split(",")]
    settings = SolverSettings(max_iters=args.max_iters, rel_tol=args.rel_tol,
                              theta=args.theta, seed=args.seed)
    rows = []
    table = None
    for value in grid:
        net, content = _SWEEPS[args.sweep](net0, content0, value)
        if table is None or args.sweep in ("p_s", "gamma_bl"):
            table = analytic.build_rate_table(net, seed=args.seed)
        ctx = ObjectiveContext(rates=table, profile=build_profile(content),
                               net=net, content=content, coeff=coeff,
                               theta=args.theta)
        pol1, _ = optimize_best(ctx, "fractional", settings)
        pol2, _ = optimize_best(ctx, "random", settings)
        rows.append([value, "scheme1", ee_value(pol1, ctx)])
        rows.append([value, "scheme1_exact_l0", ee_value(pol1, ctx, exact_l0=True)])
        rows.append([value, "scheme2", ee_value(pol2, ctx)])
        rows.append([value, "mpcp",
                     ee_value(mpcp_policy(content), ctx, exact_l0=True)])
        rows.append([value, "ucp", ee_value(ucp_policy(content), ctx,
                                            exact_l0=True)])
        rows.append([value, "icp",
                     icp_expected_ee(ctx, args.icp_realizations, args.seed).mean])
    out = Path(args.out_dir) / f"compare_{args.sweep}.csv"
    _write_csv(out, [args.sweep, "policy", "ee"],
               rows, {"x": args.sweep, "series": "policy", "y": ["ee"]})
    print(f"wrote {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="svcache",
                                     description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="scenario file (key = value lines)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out-dir", default=".")
    parser.add_argument("--drops", type=int, default=20_000,
                        help="Monte-Carlo drops per quantity")
    parser.add_argument("--theta", type=float, default=0.01,
                        help="l0 smoothing parameter")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", help="analytic vs Monte-Carlo cross-check")
    sub.add_parser("analyze", help="analytic quantities and rate table")
    p_sim = sub.add_parser("simulate", help="Monte-Carlo estimates only")
    p_sim.add_argument("--dump", action="store_true",
                       help="dump raw per-drop SIR samples")
    p_opt = sub.add_parser("optimize", help="run the EE maximizer")
    p_opt.add_argument("--scheme", type=int, choices=(1, 2), default=2)
    p_opt.add_argument("--init", default="ucp",
                       choices=("ucp", "mpcp", "uniform",
                                "popularity-proportional", "random"))
    p_opt.add_argument("--max-iters", type=int, default=500)
    p_opt.add_argument("--rel-tol", type=float, default=1e-6)
    p_cmp = sub.add_parser("compare", help="EE sweep across policies")
    p_cmp.add_argument("--sweep", choices=tuple(_SWEEPS), required=True)
    p_cmp.add_argument("--grid", required=True,
                       help="comma-separated grid values (SI units)")
    p_cmp.add_argument("--max-iters", type=int, default=200)
    p_cmp.add_argument("--rel-tol", type=float, default=1e-6)
    p_cmp.add_argument("--icp-realizations", type=int, default=200)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    Path(args.out_dir).mkdir(parents=True, exist_ok=True)
    handler = {"validate": cmd_validate, "analyze": cmd_analyze,
               "simulate": cmd_simulate, "optimize": cmd_optimize,
               "compare": cmd_compare}[args.command]
    try:
        return handler(args)
    except QuadratureError as exc:
        print(f"numeric non-convergence: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
