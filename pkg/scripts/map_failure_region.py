#!/usr/bin/env python3
"""Map where the conjectured-form CSS construction stops working.

Sweeps the five-weight mixture family p B3 + q1|01> + q2|10> + q3|00> + q4|11>
over a 2D slice (q3, q4) at fixed p, splitting the leftover weight between
q1 and q2 at a fixed asymmetric ratio so the general solver branch is
exercised. Classifies every grid point with the closed-form solver and
writes one CSV row per point; the failure region is where the general
branch finds no valid root at the configured grid resolution.

Usage:
    python scripts/map_failure_region.py [--p 0.66] [--steps 25] [--out FILE]
"""

import argparse
import csv
import sys

from xree import compute_ree, x_state
from xree.errors import InvalidStateError


def classify(p, q1, q2, q3, q4):
    try:
        state = x_state(q3, p / 2 + q1, p / 2 + q2, q4, p / 2)
    except InvalidStateError:
        return None
    return compute_ree(state)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=0.66, help="coherent mixture weight")
    ap.add_argument(
        "--split", type=float, default=0.4, help="fraction of the leftover put on q1"
    )
    ap.add_argument("--steps", type=int, default=25, help="grid steps per axis")
    ap.add_argument("--out", default=None, help="CSV path (default stdout)")
    args = ap.parse_args()

    rest = 1.0 - args.p
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["p", "q1", "q2", "q3", "q4", "branch", "ree", "residual_max"])
    counts = {}
    for i in range(args.steps + 1):
        for j in range(args.steps + 1):
            q3 = rest * i / args.steps
            q4 = rest * j / args.steps
            leftover = rest - q3 - q4
            if leftover < -1e-12:
                continue
            q1 = max(0.0, leftover) * args.split
            q2 = max(0.0, leftover) * (1.0 - args.split)
            result = classify(args.p, q1, q2, q3, q4)
            if result is None:
                continue
            counts[result.branch] = counts.get(result.branch, 0) + 1
            writer.writerow(
                [
                    f"{v:.12g}"
                    for v in (args.p, q1, q2, q3, q4)
                ]
                + [
                    result.branch,
                    "" if result.ree is None else f"{result.ree:.12g}",
                    "" if result.residual_max is None else f"{result.residual_max:.12g}",
                ]
            )
    if args.out:
        fh.close()
    total = sum(counts.values())
    for branch in sorted(counts):
        print(f"{branch}: {counts[branch]}/{total}", file=sys.stderr)


if __name__ == "__main__":
    main()
