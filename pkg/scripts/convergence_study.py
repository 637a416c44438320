#!/usr/bin/env python3
"""Defect and radius convergence study for one exponent.

Runs the full pipeline over a truncation sweep and prints a table of the
rigorous per-N quantities (defect bounds, inverse bound, certified radii,
and the resulting two-sided enclosure).

Example:
    python scripts/convergence_study.py --p 3 --N 10,20,30,34
"""

import argparse
import sys

from sobemb.pipeline import RunConfig, run_pipeline
from sobemb.series import DomainRect


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--N", type=lambda s: [int(t) for t in s.split(",")],
                    default=[10, 20, 30, 34])
    ap.add_argument("--L1", type=float, default=1.0)
    ap.add_argument("--L2", type=float, default=1.0)
    args = ap.parse_args(argv)

    cfg = RunConfig(p=args.p, domain=DomainRect(args.L1, args.L2), N=args.N)
    report = run_pipeline(cfg)

    hdr = (f"{'N':>4} {'status':>12} {'defect_hm1_hi':>14} {'K_hi':>10} "
           f"{'r_h1_hi':>12} {'r_inf_hi':>12} {'lower':>18} {'upper':>18} "
           f"{'sec':>7}")
    print(hdr)
    for r in report.rows:
        def f(v, spec="{:.6e}"):
            return "-" if v is None else spec.format(v)

        print(f"{r.N:>4} {r.status:>12} "
              f"{f(None if r.defect_hm1 is None else r.defect_hm1.hi):>14} "
              f"{f(None if r.K is None else r.K.hi, '{:.4f}'):>10} "
              f"{f(None if r.r_h1 is None else r.r_h1.hi):>12} "
              f"{f(None if r.r_inf is None else r.r_inf.hi):>12} "
              f"{f(r.lower, '{:.12f}'):>18} {f(r.upper, '{:.12f}'):>18} "
              f"{r.seconds:>7.1f}")
    if report.final is not None:
        fi = report.final
        print(f"\nfinal C_{fi.p} enclosure: [{fi.lower:.17g}, {fi.upper:.17g}]"
              f"  (width {fi.upper - fi.lower:.3e}, upper from "
              f"{fi.sources['upper']})")
    return 0 if report.fully_certified else 2


if __name__ == "__main__":
    sys.exit(main())
