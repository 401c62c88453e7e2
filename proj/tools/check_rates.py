#!/usr/bin/env python3
"""Recompute the rate columns of a viscodg CSV from its error columns.

A filled rate cell on row i compares row i with row i-1: against h when the
mesh differs, otherwise against dt. Exits 1 on any mismatch.
"""

import argparse
import csv
import math
import sys

ERRORS = ["err_u_L2", "err_u_H1", "err_u_energy", "err_w_L2", "err_w_H1", "err_w_energy"]
RATES = ["rate_u_L2", "rate_u_H1", "rate_u_energy", "rate_w_L2", "rate_w_H1", "rate_w_energy"]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv")
    parser.add_argument("--tol", type=float, default=1e-12)
    parser.add_argument("--min-rated", type=int, default=1, help="fail if fewer rows carry rates")
    args = parser.parse_args()

    with open(args.csv, newline="") as f:
        rows = list(csv.DictReader(f))
    missing = [c for c in ERRORS + RATES if rows and c not in rows[0]]
    if missing:
        print(f"missing columns: {missing}")
        return 1

    rated = 0
    worst = 0.0
    for i, row in enumerate(rows):
        if all(row[c] == "" for c in RATES):
            continue
        if i == 0:
            print("first row carries rates")
            return 1
        prev = rows[i - 1]
        if (prev["scheme"], prev["k"]) != (row["scheme"], row["k"]):
            print(f"row {i + 1}: rate across a scheme or degree change")
            return 1
        key = "h" if prev["n"] != row["n"] else "dt"
        s0, s1 = float(prev[key]), float(row[key])
        for e, r in zip(ERRORS, RATES):
            want = math.log(float(prev[e]) / float(row[e])) / math.log(s0 / s1)
            got = float(row[r])
            diff = abs(got - want)
            worst = max(worst, diff)
            if diff > args.tol * max(1.0, abs(want)):
                print(f"row {i + 1} {r}: csv {got!r}, recomputed {want!r}")
                return 1
        rated += 1
    if rated < args.min_rated:
        print(f"only {rated} rows carry rates")
        return 1
    print(f"{rated} rated rows agree, max difference {worst:.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
