#!/usr/bin/env python3
"""Run every verification suite and write one merged JSON report.

Equivalent to `verify run all --jobs 4 --out reports/all.json` but
usable without the console script being on PATH.
"""

import os
import sys

from ribetkit.veriharness.cli import main


def run():
    out = os.path.join(os.path.dirname(__file__), "..", "reports", "all.json")
    os.makedirs(os.path.dirname(out), exist_ok=True)
    return main(["run", "all", "--jobs", "4", "--out", out])


if __name__ == "__main__":
    sys.exit(run())
