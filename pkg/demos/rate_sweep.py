"""Logical error rate against p under strongly biased noise.

Compares ZZZY, XZZX and surface codes at d=3 and writes ``rate_sweep.svg``.
"""

import argparse

from zzzy import run
from zzzy.montecarlo import grid
from zzzy.plotting import plot_rows

PS = [0.003, 0.01, 0.03, 0.1]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--A", type=float, default=100.0)
    ap.add_argument("--trials", type=int, default=200_000)
    ap.add_argument("--out", default="rate_sweep.svg")
    args = ap.parse_args()
    rows = []
    for cfg in grid(["zzzy", "xzzx", "surface"], [3], PS, [args.A], args.trials, seed=11):
        res = run(cfg)
        lo, hi = res.ci
        rows.append({"family": cfg.family, "d": cfg.d, "p": cfg.p, "pl": res.pl, "ci_lo": lo, "ci_hi": hi})
        print(f"{cfg.family:8s} p={cfg.p:<6g} p_L={res.pl:.3e}  [{lo:.2e}, {hi:.2e}]")
    n = plot_rows(rows, "p", args.out, title=f"d=3, A={args.A:g}")
    print(f"wrote {args.out} ({n} points)")


if __name__ == "__main__":
    main()
