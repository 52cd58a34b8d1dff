#!/usr/bin/env python3
"""Solve for the minimal certifiable height bound B* at several (q, d).

For each configuration the solver walks height levels q^level, checks
the three-inequality system against the worst conductor shape at that
level, and reports the first level above which everything certifies.
The q=3, d=1 anchor is B* = 3^52; the default grid (2^40) is provably
too small for that, which is why the explicit grid below is 3^70.
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cmtk import minimal_height_bound

CONFIGS = [
    {"q": 3, "d": 1, "F_deg": 1, "grid": 3**70},
    {"q": 3, "d": 1, "F_deg": 2, "grid": 3**70},
    {"q": 3, "d": 2, "F_deg": 1, "grid": 3**80},
    {"q": 5, "d": 1, "F_deg": 1, "grid": 5**60},
]


def main():
    for cfg in CONFIGS:
        t0 = time.time()
        bound, audit = minimal_height_bound(
            cfg["d"], cfg["F_deg"], cfg["q"], grid=cfg["grid"]
        )
        elapsed = time.time() - t0
        level = audit["boundary_level"]
        print(
            f"q={cfg['q']} d={cfg['d']} F_deg={cfg['F_deg']}: "
            f"B* = {cfg['q']}^{level} = {bound}  ({elapsed:.2f}s)"
        )
        worst = audit["last_failing_config"]
        print(f"  last infeasible level {audit['last_infeasible_level']}, "
              f"worst split {worst}")


if __name__ == "__main__":
    main()
