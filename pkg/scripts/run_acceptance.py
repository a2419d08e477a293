#!/usr/bin/env python3
"""Run the acceptance gate on its own and echo the per-criterion verdicts."""

import pathlib
import subprocess
import sys


def run() -> int:
    gate = pathlib.Path(__file__).resolve().parent.parent \
        / "tests" / "test_acceptance.py"
    cmd = [sys.executable, "-m", "pytest", str(gate), "-v", *sys.argv[1:]]
    return subprocess.call(cmd)


if __name__ == "__main__":
    sys.exit(run())
