"""Build each code family at d=3 and print its generators and logicals."""

from zzzy import FAMILIES, build_code, validate
from zzzy.analysis import logical_census


def main() -> None:
    for family in FAMILIES:
        code = build_code(family, 3)
        print(f"[[{code.n},1,{code.d}]] {family}")
        for label, g in sorted(zip(code.labels, code.generators), key=lambda lg: lg[0]):
            print(f"  G{label}: {g}")
        print(f"  logical X: {code.logical_x}")
        print(f"  logical Z: {code.logical_z}")
        census = logical_census(code)
        print(f"  logicals of weight 3: {census[3]}, weight 4: {census[4]}")
        problems = validate(code)
        print("  checks: " + ("ok" if not problems else "; ".join(problems)))
        print()


if __name__ == "__main__":
    main()
