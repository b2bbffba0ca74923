"""Tabulate uncorrected fractions for weight t+1 errors at d=3 and d=5.

Pass ``--quick`` to skip the d=5 enumerations, which take about a minute.
"""

import argparse

from zzzy import build_code, enumerate_fractions
from zzzy.analysis import class_label, classes


def row(table) -> str:
    return "  ".join(f"{class_label(table.j, i, l)}={table.f(i, l):.3f}" for i, l in classes(table.j))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()
    distances = [3] if args.quick else [3, 5]
    for d in distances:
        for family in ("zzzy", "surface"):
            code = build_code(family, d)
            table = enumerate_fractions(code, code.t + 1)
            print(f"{family:8s} d={d}  {row(table)}")
            if family == "zzzy":
                rnd = enumerate_fractions(code, code.t + 1, tie_break="random", seed=1)
                print(f"{'':8s} random ties  {row(rnd)}")


if __name__ == "__main__":
    main()
