#!/usr/bin/env python3
"""Scan base points for measures that push the composition bound.

For each |a| the scan searches small atomic measures for a large certified
ratio lower(f o lambda_a) / tv(mu) and prints it against the ceiling
(1 + 2|a|)/(1 - |a|).  Achieved ratios are lower bounds; the gap column
shows how much ceiling is unused by the search.

Usage: python scripts/run_sharpness_scan.py [--amax 0.9] [--steps 10]
           [--degree-cap 6] [--seed N] [--out scan.csv]
"""

import argparse
import csv
import sys

from cstrans.norm_engine import sharpness_scan


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--amax", type=float, default=0.9)
    parser.add_argument("--steps", type=int, default=10)
    parser.add_argument("--degree-cap", type=int, default=6)
    parser.add_argument("--seed", type=int, default=20240001)
    parser.add_argument("--out", default=None, help="write rows as CSV")
    args = parser.parse_args()

    a_values = [args.amax * k / max(args.steps - 1, 1) for k in range(args.steps)]
    rows = sharpness_scan(a_values, degree_cap=args.degree_cap, seed=args.seed)

    print(f"{'a':>6} {'ratio':>12} {'bound':>12} {'gap':>12} {'atoms':>6}")
    for row in rows:
        print(f"{row.a:6.3f} {row.ratio:12.6f} {row.bound:12.6f} {row.margin:12.6f} {row.atom_count:6d}")

    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["a", "ratio", "bound", "margin", "atom_count"])
            for row in rows:
                writer.writerow([row.a, row.ratio, row.bound, row.margin, row.atom_count])
        print(f"rows -> {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
