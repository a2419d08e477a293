#!/usr/bin/env python3
"""Run every benchmark suite and drop one CSV per suite into --out-dir."""

import argparse
import pathlib
import sys

from capdp.cli import SUITES, main


def parse_args() -> argparse.Namespace:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="bench-results")
    ap.add_argument("--scale", choices=("small", "full"), default="full")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--suite", choices=SUITES, action="append",
                    help="repeatable; default runs all suites")
    return ap.parse_args()


def run() -> int:
    args = parse_args()
    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    worst = 0
    for suite in args.suite or SUITES:
        out = out_dir / f"{suite}.csv"
        print(f"== {suite} -> {out}", flush=True)
        code = main(["bench", suite, "--scale", args.scale,
                     "--seed", str(args.seed), "--jobs", str(args.jobs),
                     "--out", str(out)])
        if code:
            print(f"   exited {code}", file=sys.stderr)
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(run())
