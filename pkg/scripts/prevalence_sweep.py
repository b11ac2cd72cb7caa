"""How the three prevalence tests behave as y degenerates.

For each family, y = y_generic + eps * (y_degenerate - y_generic) is swept from a
prevalent vector towards a rank-deficient one; the script records the three
verdicts at each eps and where they switch.
"""

import argparse
import json
import sys

import numpy as np

from rcircles.lie import exp_nilpotent, is_prevalent, prevalent_iso_check
from rcircles.scalars import DEFAULT_TOL
from rcircles.suites import SAMPLED_T, build_model, prevalence_families, trial_rng


def verdicts(model, P, Q, y, sp, sq, tol=DEFAULT_TOL):
    a = is_prevalent(y, sq, tol=tol)
    b = prevalent_iso_check(y, sp, sq, tol=tol)
    c = all(model.is_opposite(Pt, P) and model.is_opposite(Pt, Q)
            for Pt in (model.act(exp_nilpotent(t * y, tol), P) for t in SAMPLED_T))
    return bool(a), bool(b), bool(c)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--steps", type=int, default=11)
    ap.add_argument("--families", nargs="*", default=None)
    ap.add_argument("--out")
    args = ap.parse_args(argv)

    eps_grid = np.linspace(0.0, 1.0, args.steps)
    out = []
    for fam in args.families or prevalence_families():
        m = build_model(fam)
        rng = trial_rng(args.seed, 0)
        P0, Q0 = m.standard_pair()
        y_gen, y_deg = m.sample_qperp(rng), m.sample_qperp(rng, degenerate=True)
        sp, sq = m.stabilizer(P0), m.stabilizer(Q0)
        rows = [{"eps": float(e), "verdicts": verdicts(m, P0, Q0, y_gen + e * (y_deg - y_gen), sp, sq)}
                for e in eps_grid]
        agree = all(len(set(r["verdicts"])) == 1 for r in rows)
        out.append({"family": fam, "agree": agree, "sweep": rows})
        flips = [r["eps"] for r in rows if not r["verdicts"][0]]
        print(f"{fam:28s} agree {agree}  first non-prevalent eps {flips[0] if flips else None}", file=sys.stderr)
    text = json.dumps({"seed": args.seed, "families": out}, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if all(r["agree"] for r in out) else 1


if __name__ == "__main__":
    sys.exit(main())
