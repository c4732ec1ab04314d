#!/usr/bin/env python3
"""Round-complexity scaling sweep on sparse random graphs.

Runs the refined decomposition pipeline over doubling sizes of G(n, 8/n),
prints a table of ledger totals, and fits the best integer exponent k for a
c * (ln n)^k growth model. Writes the raw rows as CSV when --csv is given.
"""

import argparse
import math
import sys
import time

import numpy as np

from netdecomp import decompose, generate, make_refined_carver, linial_saks_black_box
from netdecomp.seeding import derive_seed


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="256,512,1024,2048,4096,8192")
    ap.add_argument("--trials", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--csv", default=None)
    args = ap.parse_args()

    sizes = [int(s) for s in args.sizes.split(",")]
    carver = make_refined_carver(linial_saks_black_box)
    rows = []
    print(f"{'n':>6} {'m':>7} {'colors':>6} {'maxdiam':>7} {'rounds':>10} {'sec':>6}")
    for n in sizes:
        for trial in range(args.trials):
            seed = derive_seed(args.seed, n, trial)
            g = generate("gnp", seed=derive_seed(seed, 0), n=n, p=8.0 / n)
            t0 = time.perf_counter()
            d, ledger = decompose(g, seed, carver)
            dt = time.perf_counter() - t0
            rows.append((n, g.m, d.colors, d.max_diameter(), ledger.total_rounds, dt))
            print(f"{n:>6} {g.m:>7} {d.colors:>6} {d.max_diameter():>7} "
                  f"{ledger.total_rounds:>10} {dt:>6.2f}")

    ns = np.array([r[0] for r in rows], dtype=float)
    totals = np.array([r[4] for r in rows], dtype=float)
    x = np.log(np.log(ns))
    y = np.log(totals)
    residuals = []
    for k in range(0, 21):
        rr = y - k * x
        residuals.append(float(((rr - rr.mean()) ** 2).sum()))
    best_k = int(np.argmin(residuals))
    c11 = max(t / math.log(n) ** 11 for n, t in zip(ns, totals))
    print(f"\nbest ln^k fit: k = {best_k}; ln^11 envelope constant c = {c11:.3g}")

    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write("n,m,colors,max_diameter,rounds,seconds\n")
            for r in rows:
                fh.write(",".join(str(v) for v in r) + "\n")
        print(f"wrote {args.csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
