"""Sweep circle/geodesic gaps over every model family and write a JSON summary.

    python3 scripts/circle_geodesic_sweep.py --trials 50 --seed 3 --out gaps.json
"""

import argparse
import json
import sys

import numpy as np

from rcircles.scalars import Tolerance
from rcircles.suites import circle_families, circle_geodesic_suite


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=50)
    ap.add_argument("--tol-eq", type=float, default=1e-8)
    ap.add_argument("--families", nargs="*", default=None, help="subset, e.g. sphere:2 quadric:5")
    ap.add_argument("--out")
    args = ap.parse_args(argv)

    tol = Tolerance(eq_abs=args.tol_eq)
    rows = []
    for fam in args.families or circle_families():
        rep = circle_geodesic_suite(args.trials, args.seed, tol, families=[fam], samples=args.samples)
        gaps = np.array([r["residual"] for r in rep.results if r["residual"] != "inf"])
        rows.append({
            "family": fam,
            "trials": rep.trials,
            "failures": rep.failures,
            "max_gap": float(gaps.max()) if gaps.size else None,
            "median_gap": float(np.median(gaps)) if gaps.size else None,
            "seconds": round(rep.seconds, 3),
        })
        print(f"{fam:28s} max {rows[-1]['max_gap']:.2e}  median {rows[-1]['median_gap']:.2e}  "
              f"failures {rep.failures}", file=sys.stderr)
    text = json.dumps({"seed": args.seed, "trials": args.trials, "samples": args.samples, "families": rows}, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if all(r["failures"] == 0 for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
