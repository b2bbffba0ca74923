"""Trace the two-pass decoder on a few hand-picked errors."""

from zzzy import PauliOperator, build_code, decode_error, update_weights
from zzzy.decoder import MatchingDecoder
from zzzy.pauli import syndrome

CASES = [
    ("zzzy", 3, "Z2 Z3"),
    ("zzzy", 3, "Z6 Z8"),
    ("zzzy", 3, "Y7"),
    ("zzzy", 5, "Y6 Y15"),
    ("surface", 3, "Z2 Z3"),
]


def show(family: str, d: int, text: str) -> None:
    code = build_code(family, d)
    e = PauliOperator.from_string(code.n, text)
    s = syndrome(code, e)
    fired = [f"G{lab}" for lab in sorted(code.labels[r] for r in range(len(s)) if s[r])]
    print(f"{family} d={d}  error {e}")
    print(f"  syndrome: {' '.join(fired) or '(none)'}")
    if code.n_zy:
        q = update_weights(s, [1.0] * code.n, code)
        print("  Y-qubit weights: " + " ".join(f"q({k + 1})={q[k]:g}" for k in code.y_qubits))
        bare = MatchingDecoder(code, safeguard=False).decode(s).e_hat
        print(f"  weighted matching alone: {bare}")
    result, outcome = decode_error(code, e)
    if result.fallback:
        print("  plain matching was lighter and within t, so it was used")
    print(f"  correction: {result.e_hat}")
    print(f"  outcome: {outcome.value}")
    print()


def main() -> None:
    for case in CASES:
        show(*case)


if __name__ == "__main__":
    main()
