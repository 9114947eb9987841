#!/usr/bin/env python3
"""Full envelope-ratio sweep with the default stratified grid.

Writes per-weight CSV and a JSON summary under artifacts/ and prints the
per-shell maxima so the stabilization of the empirical constant is visible
at a glance.  Thread count comes from SU3CHAR_THREADS (results do not
depend on it).
"""

import os
import sys

from su3char.cli import main

OUT = os.path.join(os.path.dirname(__file__), "..", "artifacts")


def run():
    os.makedirs(OUT, exist_ok=True)
    argv = [
        "verify-envelope",
        "--out-csv", os.path.join(OUT, "envelope_sweep.csv"),
        "--out-json", os.path.join(OUT, "envelope_sweep.json"),
    ] + sys.argv[1:]
    return main(argv)


if __name__ == "__main__":
    sys.exit(run())
