#!/usr/bin/env python3
"""Reproduce the reference enclosures and the classical upper-bound table.

Thin wrapper over the CLI `reproduce` subcommand.  Runs, in order:
  * the classical upper-bound table (instant),
  * the C4 sweep  (p=3, N = 10, 20, 30, 34; ~1 min),
  * the C3 sweep  (p=2, N = 40, 56, 72;    ~2 min),
  * the C5 sweep  (p=4, N = 12, 16, 20;    ~1 min),
and writes one JSON file per target next to this script (or into --outdir).

Exit code 0 means every sweep entry certified; 2 means at least one entry
failed certification but a sound enclosure was still produced.
"""

import argparse
import pathlib
import sys

from sobemb.cli import main as cli_main

TARGETS = ("table", "c4", "c3", "c5")


def run(outdir: pathlib.Path) -> int:
    outdir.mkdir(parents=True, exist_ok=True)
    status = 0
    for target in TARGETS:
        out = outdir / f"reproduce_{target}.json"
        print(f"==> {target} -> {out}", flush=True)
        rc = cli_main(["reproduce", "--which", target, "--out", str(out)])
        print(out.read_text(), flush=True)
        status = max(status, rc)
    return status


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", type=pathlib.Path,
                    default=pathlib.Path(__file__).resolve().parent / "out")
    sys.exit(run(ap.parse_args().outdir))
