#!/usr/bin/env python3
"""Tabulate the model integral against its closed-form majorant.

For each p and each sorted magnitude triple a >= b >= c from the pool,
prints I_numeric, I_bound and their ratio; the largest ratio per p is the
empirical constant K(p).  A growing ratio along the magnitude shells would
mean the majorant misses a log factor somewhere.
"""

import math
import sys
from itertools import combinations_with_replacement

from su3char import I_bound, I_numeric, QuadratureSpec

POOL = (1.0, 4.0, 16.0, 64.0, 256.0)
P_VALUES = (2.0, 2.8, 3.0, 4.0, 5.5)


def run():
    spec = QuadratureSpec(mapping="duffy")
    for p in P_VALUES:
        print(f"p = {p}")
        best = 0.0
        for x, y, z in combinations_with_replacement(POOL, 3):
            a, b, c = z, y, x
            num = I_numeric(p, a, b, c, spec)
            bound = I_bound(p, a, b, c)
            ratio = num / bound
            best = max(best, ratio)
            print(f"  ({a:>5.0f},{b:>5.0f},{c:>5.0f})  "
                  f"I = {num:.6e}  bound = {bound:.6e}  ratio = {ratio:.4f}")
        print(f"  K({p}) = {best:.4f}")
        if not math.isfinite(best):
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(run())
