#!/usr/bin/env python3
"""Slope table for the norm-growth exponents along both weight families.

Runs the four (family, p) combinations used in the acceptance suite and
prints fitted vs expected slope.  Pass --quick for a reduced N range while
iterating on quadrature settings.
"""

import argparse
import sys

from su3char import QuadratureSpec, scaling_fit

CASES = [
    # family, p, expected slope
    ("axis", 4.0, 0.25),        # mu_bar^(1-3/p) at fixed mu_min
    ("axis", 6.0, 2.0 / 3.0),   # mu_bar^(2-8/p)
    ("diagonal", 4.0, 1.0),     # mu_min^(3-8/p), both parameters growing
    ("diagonal", 2.0, 0.0),     # orthonormality: no growth at all
]


def run(n_values):
    print(f"N values: {list(n_values)}")
    print(f"{'family':<10} {'p':>4} {'slope':>8} {'expected':>9} {'residual':>9}")
    bad = 0
    for family, p, want in CASES:
        fit = scaling_fit(family, p, n_values, QuadratureSpec())
        slope = fit.slope_trimmed if fit.slope_trimmed is not None else fit.slope
        resid = fit.residual_trimmed if fit.residual_trimmed is not None else fit.residual
        flag = ""
        if abs(slope - want) > 0.07:
            flag = "  <-- off"
            bad += 1
        print(f"{family:<10} {p:>4.1f} {slope:>8.4f} {want:>9.4f} {resid:>9.2e}{flag}")
    return 1 if bad else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="N up to 64 only")
    args = ap.parse_args()
    ns = (8, 16, 32, 64) if args.quick else (8, 16, 32, 64, 128, 256, 512)
    sys.exit(run(ns))
