"""Logical error rate against noise asymmetry at fixed p.

Draws the low-p analytic estimate for ZZZY and surface codes at d=3 and
overlays Monte Carlo points.  Writes ``asymmetry_sweep.svg``.
"""

import argparse

from zzzy import build_code, enumerate_fractions, make_channel, pl_approx, run
from zzzy.montecarlo import TrialConfig, wilson_interval
from zzzy.plotting import plot_rows

ASYMMETRIES = [1, 3, 10, 30, 100, 300, 1000]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=0.01)
    ap.add_argument("--trials", type=int, default=200_000)
    ap.add_argument("--out", default="asymmetry_sweep.svg")
    args = ap.parse_args()
    rows = []
    for family in ("zzzy", "surface"):
        code = build_code(family, 3)
        table = enumerate_fractions(code, code.t + 1)
        for A in ASYMMETRIES:
            pl = pl_approx(code, make_channel(args.p, A), table)
            rows.append({"family": f"{family} (analytic)", "d": 3, "A": A, "pl": pl, "ci_lo": pl, "ci_hi": pl})
            res = run(TrialConfig(family, 3, args.p, A, args.trials, seed=7))
            lo, hi = wilson_interval(res.failures, res.trials)
            rows.append({"family": family, "d": 3, "A": A, "pl": res.pl, "ci_lo": lo, "ci_hi": hi})
            print(f"{family:8s} A={A:<5g} analytic {pl:.3e}  simulated {res.pl:.3e}")
    n = plot_rows(rows, "A", args.out, title=f"d=3, p={args.p}")
    print(f"wrote {args.out} ({n} points)")


if __name__ == "__main__":
    main()
