"""Command line interface.

Subcommands:
  solve      run the Galerkin-Newton solver, emit the sine series as JSON
  certify    solve (or load) a series and emit the certification record
  enclose    full pipeline: solve -> certify -> two-sided enclosure report
  classical  closed-form upper-bound table for a list of exponents
  reproduce  canned configurations for the reference enclosures and table

Exit codes: 0 full success, 2 partial success (some sweep entries failed
certification), 1 hard error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .bounds import outward_decimal
from .certify import certify_ball
from .errors import SobembError
from .pipeline import (
    RunConfig,
    classical_table,
    emit_plot_data,
    report_csv,
    run_pipeline,
)
from .series import DomainRect, Series2D
from .solver import SolverConfig, initial_guess, newton_solve

EXIT_OK = 0
EXIT_HARD = 1
EXIT_PARTIAL = 2


def _parse_domain(text: str) -> DomainRect:
    try:
        l1, l2 = text.lower().split("x")
        return DomainRect(float(l1), float(l2))
    except (ValueError, SobembError) as exc:
        raise argparse.ArgumentTypeError(
            f"domain must look like '1x1' or '2.0x1.5': {exc}"
        )


def _parse_int_list(text: str) -> list:
    return [int(t) for t in text.split(",") if t]


def _add_common(sub):
    sub.add_argument("--p", type=int, default=3,
                     help="PDE exponent p (the enclosure targets C_{p+1})")
    sub.add_argument("--domain", type=_parse_domain,
                     default=DomainRect(1.0, 1.0), help="rectangle sides LxW")
    sub.add_argument("--out", default=None, help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sobemb",
        description="Certified two-sided enclosures of Sobolev embedding "
                    "constants on rectangles.",
    )
    ap.add_argument("-v", "--verbose", action="store_true",
                    help="log solver iterations")
    sp = ap.add_subparsers(dest="command", required=True)

    s = sp.add_parser("solve", help="run the approximate solver")
    _add_common(s)
    s.add_argument("--N", type=int, default=20, help="truncation order")
    s.add_argument("--tol", type=float, default=1e-13)

    s = sp.add_parser("certify", help="certify an approximate solution")
    _add_common(s)
    s.add_argument("--N", type=int, default=20)
    s.add_argument("--in", dest="infile", default=None,
                   help="series JSON produced by 'solve' (otherwise re-solve)")
    s.add_argument("--nprime", type=int, default=None,
                   help="split order of the inverse bound (default N)")

    s = sp.add_parser("enclose", help="full pipeline with an N sweep")
    _add_common(s)
    s.add_argument("--N", type=_parse_int_list, default=[10, 20, 30, 34],
                   help="comma-separated truncation sweep")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--plot-grid", type=int, default=0,
                   help="emit <out>.plot.csv samples on an MxM grid")

    s = sp.add_parser("classical", help="closed-form upper-bound table")
    _add_common(s)
    s.add_argument("--p-list", type=_parse_int_list, default=[3, 4, 5],
                   help="Lebesgue exponents of the embedding")
    s.add_argument("--n", type=int, default=2, help="space dimension")
    s.add_argument("--rho", type=float, default=None,
                   help="spectral lower bound (requires --unchecked-rho)")
    s.add_argument("--unchecked-rho", action="store_true")

    s = sp.add_parser("reproduce", help="run the reference configurations")
    s.add_argument("--which", choices=("c3", "c4", "c5", "table", "all"),
                   default="c4")
    s.add_argument("--out", default=None)
    return ap


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _cmd_solve(args) -> int:
    cfg = SolverConfig(p=args.p, N=args.N, newton_tol=args.tol)
    u = newton_solve(cfg, initial_guess(args.p, args.domain))
    _emit(u.to_json(), args.out)
    return EXIT_OK


def _cmd_certify(args) -> int:
    if args.infile:
        with open(args.infile) as f:
            u = Series2D.from_json(f.read())
    else:
        cfg = SolverConfig(p=args.p, N=args.N)
        u = newton_solve(cfg, initial_guess(args.p, args.domain))
    ball = certify_ball(u, args.p, nprime=args.nprime)
    _emit(ball.to_json(args.p), args.out)
    return EXIT_OK if ball.positive else EXIT_PARTIAL


def _cmd_enclose(args) -> int:
    cfg = RunConfig(p=args.p, domain=args.domain, N=args.N,
                    out=args.out, format=args.format,
                    emit_plot_data=args.plot_grid >= 2,
                    plot_grid=max(args.plot_grid, 2))
    report = run_pipeline(cfg)
    text = report.to_json() if cfg.format == "json" else report_csv(report)
    _emit(text, args.out)
    if cfg.emit_plot_data and report.solutions:
        best_n = max(report.solutions)
        target = (args.out or "sobemb") + ".plot.csv"
        emit_plot_data(report.solutions[best_n], cfg.plot_grid, target)
    if report.fully_certified and report.final is not None:
        return EXIT_OK
    return EXIT_PARTIAL if (report.any_certified or report.final) else EXIT_HARD


def _cmd_classical(args) -> int:
    rho = None
    if args.rho is not None:
        from .intervals import Interval

        if not args.unchecked_rho:
            raise SobembError("--rho requires --unchecked-rho")
        rho = Interval(args.rho)
    table = classical_table(args.n, args.p_list, args.domain, rho=rho,
                            unchecked=args.rho is not None)
    out = {
        "format": "sobemb-classical/1",
        "n": args.n,
        "domain": {"L1": args.domain.L1.hex(), "L2": args.domain.L2.hex()},
        "rows": [
            {
                "p": row["p"],
                "corollary": [row["corollary"].lo.hex(), row["corollary"].hi.hex()],
                "corollary_decimal": outward_decimal(row["corollary"].hi, +1),
                "plum": [row["plum"].lo.hex(), row["plum"].hi.hex()],
                "plum_decimal": outward_decimal(row["plum"].hi, +1),
            }
            for row in table
        ],
    }
    _emit(json.dumps(out, sort_keys=True, indent=2), args.out)
    return EXIT_OK


REPRODUCE_SWEEPS = {
    "c4": (3, [10, 20, 30, 34]),
    "c3": (2, [40, 56, 72]),
    "c5": (4, [12, 16, 20]),
}


def _cmd_reproduce(args) -> int:
    dom = DomainRect(1.0, 1.0)
    results = {}
    status = EXIT_OK
    targets = ["c4", "c3", "c5", "table"] if args.which == "all" else [args.which]
    for t in targets:
        if t == "table":
            table = classical_table(2, [3, 4, 5], dom)
            results["table"] = {
                str(row["p"]): {
                    "corollary": outward_decimal(row["corollary"].hi, +1),
                    "plum": outward_decimal(row["plum"].hi, +1),
                }
                for row in table
            }
            continue
        p, sweep = REPRODUCE_SWEEPS[t]
        report = run_pipeline(RunConfig(p=p, domain=dom, N=sweep))
        if report.final is None:
            status = max(status, EXIT_PARTIAL)
            results[t] = {"error": report.error}
        else:
            if not report.fully_certified:
                status = max(status, EXIT_PARTIAL)
            results[t] = {
                "lower": outward_decimal(report.final.lower, -1),
                "upper": outward_decimal(report.final.upper, +1),
                "sources": report.final.sources,
            }
    _emit(json.dumps(results, sort_keys=True, indent=2), args.out)
    return status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(name)s %(message)s",
    )
    handler = {
        "solve": _cmd_solve,
        "certify": _cmd_certify,
        "enclose": _cmd_enclose,
        "classical": _cmd_classical,
        "reproduce": _cmd_reproduce,
    }[args.command]
    try:
        return handler(args)
    except SobembError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_HARD


if __name__ == "__main__":
    sys.exit(main())
