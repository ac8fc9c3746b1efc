"""Command-line front end.

Subcommands: ``compute`` (state-file report), ``ising-sweep`` (CSV plus an
optional rendered figure), ``oracle-check`` (definitional-oracle agreement),
``isotropic`` (closed-form values), ``selftest`` (acceptance suite).

Exit codes: 0 success, 1 input or I/O error, 2 domain error (an entangled
state where a separable one is required).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import acceptance, ising, measures, nem
from .qcore import DensityValidationError, read_density

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DOMAIN = 2


def _emit(report: dict) -> None:
    sys.stdout.write(json.dumps(report) + "\n")


def cmd_compute(args) -> int:
    try:
        rho = read_density(args.state)
    except (OSError, json.JSONDecodeError, DensityValidationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT

    report = {"dims": list(rho.dims)}
    report["ppt_min_eigenvalue"] = measures.ppt_min_eigenvalue(rho)
    if rho.dims != (2, 2):
        report.update({"lambda": None, "concurrence": None, "nem": None, "ess": None})
        _emit(report)
        return EXIT_OK

    data = measures.lambda_two_qubit(rho)
    report["lambda"] = data.lam
    report["concurrence"] = data.concurrence
    try:
        report["nem"] = nem.nem_two_qubit(rho)
        report["ess"] = nem.is_ess_two_qubit(rho)
    except nem.EntangledInput:
        report["nem"] = None
        report["ess"] = None
        _emit(report)
        return EXIT_DOMAIN
    _emit(report)
    return EXIT_OK


def cmd_ising_sweep(args) -> int:
    try:
        sweep = ising.nem_sweep(args.lambda_min, args.lambda_max, args.steps, args.r, args.h)
    except ising.EntangledRdm as exc:
        _emit(
            {
                "error": "entangled-rdm",
                "lambda": exc.lam,
                "r": exc.r,
                "concurrence": exc.concurrence,
            }
        )
        return EXIT_DOMAIN
    except (ValueError, ising.QuadratureError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    try:
        ising.write_sweep_csv(sweep, args.out)
        if args.plot:
            from .plotting import render_sweep_figure

            render_sweep_figure(sweep, args.plot)
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    loc, mag = sweep.extremum()
    summary = {
        "rows": len(sweep.rows),
        "out": str(args.out),
        "extremum_lambda": loc,
        "extremum_abs_dnem": mag,
    }
    if args.plot:
        summary["plot"] = str(args.plot)
    _emit(summary)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    try:
        cfg = nem.OracleConfig.from_json(args.config) if args.config else nem.OracleConfig()
    except (OSError, json.JSONDecodeError, TypeError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    if args.trials < 1:
        sys.stderr.write("error: trials must be >= 1\n")
        return EXIT_INPUT

    gaps = []
    for i in range(args.trials):
        rho = nem.sample_separable(args.seed + i, i % 8 + 1)
        exact = nem.nem_two_qubit(rho)
        est, _ = nem.nem_oracle(
            rho,
            nem.OracleConfig(
                restarts=cfg.restarts,
                max_iters=cfg.max_iters,
                feasibility_delta=cfg.feasibility_delta,
                seed=cfg.seed + 1009 * i,
                t_max=cfg.t_max,
            ),
        )
        gaps.append(abs(est - exact))
    max_gap = max(gaps)
    _emit(
        {
            "trials": args.trials,
            "seed": args.seed,
            "max_gap": max_gap,
            "mean_gap": sum(gaps) / len(gaps),
            "pass": max_gap <= 1e-2,
        }
    )
    return EXIT_OK if max_gap <= 1e-2 else EXIT_DOMAIN


def cmd_isotropic(args) -> int:
    try:
        conc = measures.isotropic_i_concurrence(args.d, args.F)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    report = {"d": args.d, "F": args.F, "i_concurrence": conc}
    if args.F <= 1.0 / args.d:
        report["nem_lower_bound"] = nem.nem_isotropic_lower_bound(args.d, args.F)
    else:
        report["nem_lower_bound"] = None
    if args.d == 2:
        report["lambda_exact"] = measures.lambda_two_qubit(
            measures.isotropic_state(2, args.F)
        ).lam
    _emit(report)
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = acceptance.run_suite(args.criterion or None)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return EXIT_OK if not failed else EXIT_DOMAIN


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="negent",
        description="Negative entanglement measure toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="report for a density-matrix JSON file")
    p.add_argument("--state", required=True, help="path to the state file")
    p.set_defaults(fn=cmd_compute)

    p = sub.add_parser("ising-sweep", help="NEM sweep over the Ising coupling, to CSV")
    p.add_argument("--lambda-min", type=float, default=0.0)
    p.add_argument("--lambda-max", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=201)
    p.add_argument("--r", type=int, default=3, help="site separation")
    p.add_argument("--h", type=float, default=1e-3, help="derivative step")
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--plot", default=None, help="also render the sweep figure to this file")
    p.set_defaults(fn=cmd_ising_sweep)

    p = sub.add_parser("oracle-check", help="compare the oracle against the exact value")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", default=None, help="oracle config JSON path")
    p.set_defaults(fn=cmd_oracle_check)

    p = sub.add_parser("isotropic", help="isotropic-state closed forms")
    p.add_argument("--d", type=int, required=True, help="local dimension")
    p.add_argument("--F", type=float, required=True, help="maximally entangled fidelity")
    p.set_defaults(fn=cmd_isotropic)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument(
        "--criterion",
        type=int,
        action="append",
        help="run only this criterion (repeatable)",
    )
    p.set_defaults(fn=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
