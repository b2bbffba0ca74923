"""Exhaustive and analytic evaluation of codes and decoders.

* :func:`enumerate_fractions` decodes every weight-``j`` Pauli pattern and
  tabulates the uncorrected fraction per ``(#Z, #X)`` class.
* :func:`beta` and :func:`pl_approx` turn such a table into the fraction of
  corrected weight-``j`` errors and the low-``p`` logical error rate.
* :func:`lemma1_fraction` is the closed-form uncorrected fraction of
  weight-``t+1`` phase-flip patterns for ZZZY codes with ``d > 3``.
* :func:`weight_enumerator` counts nontrivial-logical operators by weight.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Optional

import numpy as np

from .channel import ChannelModel, class_weight
from .codes import StabilizerCode, gf2_rank
from .decoder import MatchingDecoder, decoder_for
from .pauli import PauliOperator, symplectic_syndromes

DEFAULT_BUDGET = 10**9
# stored failing patterns per class
KEEP_FAILURES = 200


def class_label(j: int, i: int, l: int) -> str:
    """Row label used in printed tables, e.g. ``XZ`` or ``ZZY``."""
    return "X" * l + "Z" * i + "Y" * (j - i - l)


def classes(j: int) -> list[tuple[int, int]]:
    """All ``(i, l)`` classes of weight ``j`` in table order (X-heavy first)."""
    out = []
    for l in range(j, -1, -1):
        for i in range(j - l, -1, -1):
            out.append((i, l))
    return out


def class_size(n: int, j: int, i: int, l: int) -> int:
    return comb(n, j) * factorial(j) // (factorial(i) * factorial(l) * factorial(j - i - l))


@dataclass
class ClassStats:
    failures: int = 0
    total: int = 0
    exact: bool = True
    failing: list = field(default_factory=list)

    @property
    def fraction(self) -> float:
        return self.failures / self.total if self.total else 0.0

    @property
    def rational(self) -> Fraction:
        return Fraction(self.failures, self.total) if self.total else Fraction(0)

    def ci(self, z: float = 1.96) -> tuple[float, float]:
        from .montecarlo import wilson_interval

        if self.exact:
            return (self.fraction, self.fraction)
        return wilson_interval(self.failures, self.total, z)


@dataclass
class FractionTable:
    """Uncorrected fractions ``f_j(i, l)`` for one code and weight."""

    family: str
    d: int
    n: int
    j: int
    stats: dict[tuple[int, int], ClassStats]

    def f(self, i: int, l: int) -> float:
        return self.stats[(i, l)].fraction

    def as_dict(self) -> dict[str, float]:
        return {class_label(self.j, i, l): self.f(i, l) for (i, l) in classes(self.j)}

    def format(self) -> str:
        head = f"[[{self.n},1,{self.d}]] {self.family}  j={self.j}"
        cells = []
        for i, l in classes(self.j):
            st = self.stats[(i, l)]
            cells.append(f"{class_label(self.j, i, l)}={_sig2(st.fraction)} ({st.failures}/{st.total})")
        return head + "\n  " + "\n  ".join(cells)


def _sig2(x: float) -> str:
    if x == 0:
        return "0"
    return f"{x:.2g}"


# -- enumeration -------------------------------------------------------------

_LETTER_BITS = {1: (0, 1), 2: (1, 0), 3: (1, 1)}  # code -> (z, x); 1=X 2=Z 3=Y


def classify_batch(code: StabilizerCode, dec: MatchingDecoder, z: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Outcome codes for a batch of errors given as ``(batch, n)`` bit arrays.

    0 = corrected, 1 = logical Z, 2 = logical X, 3 = logical Y,
    4 = syndrome mismatch.
    """
    H = code.H
    syn = symplectic_syndromes(H, z, x)
    if dec.tie_rng is not None:
        ez = np.zeros_like(z)
        ex = np.zeros_like(x)
        for b, s in enumerate(syn):
            e_hat = dec.decode(s).e_hat
            ez[b] = e_hat.z_part
            ex[b] = e_hat.x_part
        return outcome_codes(code, z ^ ez, x ^ ex)
    packed = np.packbits(syn, axis=1)
    uniq, inverse = np.unique(packed, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    ez = np.zeros((len(uniq), code.n), dtype=np.uint8)
    ex = np.zeros((len(uniq), code.n), dtype=np.uint8)
    for u, row in enumerate(uniq):
        s = np.unpackbits(row)[: code.r]
        e_hat = dec.decode(s).e_hat
        ez[u] = e_hat.z_part
        ex[u] = e_hat.x_part
    rz = z ^ ez[inverse]
    rx = x ^ ex[inverse]
    return outcome_codes(code, rz, rx)


def outcome_codes(code: StabilizerCode, rz: np.ndarray, rx: np.ndarray) -> np.ndarray:
    mismatch = symplectic_syndromes(code.H, rz, rx).any(axis=1)
    lx, lz = code.logical_x, code.logical_z
    anti_x = ((rz.astype(np.int32) @ lx.x_part + rx.astype(np.int32) @ lx.z_part) & 1).astype(bool)
    anti_z = ((rz.astype(np.int32) @ lz.x_part + rx.astype(np.int32) @ lz.z_part) & 1).astype(bool)
    out = anti_x * 1 + anti_z * 2
    out[mismatch] = 4
    return out.astype(np.uint8)


def _assignments(j: int, i: int, l: int) -> np.ndarray:
    """All orderings of ``i`` Z's, ``l`` X's and ``j-i-l`` Y's over ``j`` slots."""
    base = [2] * i + [1] * l + [3] * (j - i - l)
    return np.array(sorted(set(itertools.permutations(base))), dtype=np.uint8).reshape(-1, j)


def _pattern_arrays(n: int, positions: np.ndarray, letters: np.ndarray):
    """Expand (P, j) positions x (L, j) letter assignments to (P*L, n) bit arrays."""
    P, j = positions.shape
    L = len(letters)
    z = np.zeros((P * L, n), dtype=np.uint8)
    x = np.zeros((P * L, n), dtype=np.uint8)
    rows = np.arange(P * L)
    pos = np.repeat(positions, L, axis=0)
    let = np.tile(letters, (P, 1))
    for slot in range(j):
        col = pos[:, slot]
        code = let[:, slot]
        z[rows, col] = (code >> 1) & 1
        x[rows, col] = code & 1
    return z, x


def _combinations_chunks(n: int, j: int, chunk: int):
    it = itertools.combinations(range(n), j)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return
        yield np.array(block, dtype=np.int64).reshape(-1, j)


def enumerate_fractions(
    code: StabilizerCode,
    j: int,
    decoder: Optional[MatchingDecoder] = None,
    budget: int = DEFAULT_BUDGET,
    sample: bool = False,
    samples_per_class: int = 10**7,
    seed: int = 0,
    only: Optional[list[tuple[int, int]]] = None,
    tie_break: str = "deterministic",
) -> FractionTable:
    """Decode every weight-``j`` pattern and tabulate uncorrected fractions.

    Patterns beyond ``budget`` decodes are refused unless ``sample`` is set,
    in which case each class is estimated from ``samples_per_class`` uniform
    draws.  ``only`` restricts the run to the listed ``(i, l)`` classes.
    ``tie_break="random"`` decodes each pattern once with randomly jittered
    weights (seeded by ``seed``) instead of the lexicographic rule.
    """
    if j < 1 or j > code.t + 1:
        raise ValueError(f"weight must satisfy 1 <= j <= t+1 = {code.t + 1}, got {j}")
    if tie_break not in ("deterministic", "random"):
        raise ValueError(f"unknown tie_break {tie_break!r}")
    if tie_break == "random":
        use_weights = decoder.use_weights if decoder is not None else True
        safeguard = decoder.safeguard if decoder is not None else True
        decoder = MatchingDecoder(code, use_weights, tie_rng=np.random.default_rng(seed), safeguard=safeguard)
    dec = decoder or decoder_for(code)
    wanted = only or classes(j)
    size = sum(class_size(code.n, j, i, l) for i, l in wanted)
    stats = {c: ClassStats() for c in classes(j)}
    if size > budget:
        if not sample:
            raise ValueError(
                f"exhaustive enumeration needs {size} decodes, over the budget of {budget}; "
                "enable sampling or raise the budget"
            )
        rng = np.random.default_rng(seed)
        for i, l in wanted:
            stats[(i, l)] = _sample_class(code, dec, j, i, l, samples_per_class, rng)
        return FractionTable(code.family, code.d, code.n, j, stats)

    chunk = max(1, 200_000 // max(1, 3**j))
    for i, l in wanted:
        letters = _assignments(j, i, l)
        st = stats[(i, l)]
        for positions in _combinations_chunks(code.n, j, chunk):
            z, x = _pattern_arrays(code.n, positions, letters)
            out = classify_batch(code, dec, z, x)
            bad = np.flatnonzero(out)
            st.total += len(out)
            st.failures += len(bad)
            for b in bad[: max(0, KEEP_FAILURES - len(st.failing))]:
                st.failing.append(PauliOperator.from_arrays(z[b], x[b]))
    return FractionTable(code.family, code.d, code.n, j, stats)


def _sample_class(code, dec, j, i, l, count, rng) -> ClassStats:
    letters = _assignments(j, i, l)
    st = ClassStats(exact=False)
    batch = 100_000
    done = 0
    while done < count:
        m = min(batch, count - done)
        positions = np.argsort(rng.random((m, code.n)), axis=1)[:, :j]
        chosen = letters[rng.integers(len(letters), size=m)]
        z = np.zeros((m, code.n), dtype=np.uint8)
        x = np.zeros((m, code.n), dtype=np.uint8)
        rows = np.arange(m)
        for slot in range(j):
            z[rows, positions[:, slot]] = (chosen[:, slot] >> 1) & 1
            x[rows, positions[:, slot]] = chosen[:, slot] & 1
        out = classify_batch(code, dec, z, x)
        st.total += m
        st.failures += int(np.count_nonzero(out))
        done += m
    return st


# -- analytic quantities ----------------------------------------------------


def beta(table: FractionTable, ch: ChannelModel) -> float:
    """Channel-weighted fraction of weight-``j`` errors that are corrected."""
    if ch.p == 0:
        raise ValueError("beta is undefined for p = 0")
    j = table.j
    acc = 0.0
    for (i, l), st in table.stats.items():
        acc += class_weight(ch, j, i, l) * st.fraction
    return 1.0 - acc / ch.p**j


def pl_approx(code: StabilizerCode, ch: ChannelModel, table: FractionTable) -> float:
    """Low-``p`` logical error rate ``(1 - beta_{t+1}) C(n, t+1) p^(t+1)``."""
    if table.j != code.t + 1:
        raise ValueError(f"need the weight t+1 = {code.t + 1} table, got j={table.j}")
    if ch.p == 0:
        return 0.0
    return (1.0 - beta(table, ch)) * comb(code.n, code.t + 1) * ch.p ** (code.t + 1)


def lemma1_count(d: int) -> int:
    t = (d - 1) // 2
    return d * comb(d - 2, t + 1)


def lemma1_fraction(d: int, t: Optional[int] = None, n: Optional[int] = None) -> float:
    """Uncorrected fraction of weight-``t+1`` Z patterns, ``d C(d-2, t+1) / C(n, t+1)``."""
    if d <= 3 or d % 2 == 0:
        raise ValueError(f"closed form holds for odd d > 3, got d={d}")
    t = (d - 1) // 2 if t is None else t
    n = d * d + (d - 1) ** 2 if n is None else n
    return d * comb(d - 2, t + 1) / comb(n, t + 1)


def lemma1_patterns(code: StabilizerCode) -> set[PauliOperator]:
    """Row-confined weight-``t+1`` Z patterns that avoid the Y-measured qubits."""
    t = code.t
    y = set(code.y_qubits)
    out = set()
    for R in range(code.d):
        row = [qb for qb in range(code.n) if code.full_row(qb) == R and qb not in y]
        for combo in itertools.combinations(row, t + 1):
            out.add(PauliOperator.from_factors(code.n, [("Z", qb) for qb in combo]))
    return out


# -- weight enumerator -------------------------------------------------------


@dataclass
class WeightEnumerator:
    """Coefficients ``L[w]`` of the undetectable-error polynomial, ``w = 0 .. n``."""

    coefficients: list[int]

    @property
    def total(self) -> int:
        return sum(self.coefficients)

    def nonzero(self) -> dict[int, int]:
        return {w: c for w, c in enumerate(self.coefficients) if c}

    def __str__(self) -> str:
        return " + ".join(f"{c} z^{w}" for w, c in self.nonzero().items())


ENUMERATOR_LIMIT = 16


def weight_enumerator(code: StabilizerCode) -> WeightEnumerator:
    """Histogram the weights of every operator in the nontrivial logical cosets.

    Runs over all ``2^(n-k)`` stabilizer elements times each of the three
    nontrivial logical representatives.
    """
    r = code.r
    if r > ENUMERATOR_LIMIT:
        raise ValueError(f"n - k = {r} exceeds the enumeration limit of {ENUMERATOR_LIMIT}")
    n = code.n
    z = np.zeros(1, dtype=np.int64)
    x = np.zeros(1, dtype=np.int64)
    # Gray-code-free doubling: after step i the arrays hold all 2^(i+1) products
    for g in code.generators:
        z = np.concatenate([z, z ^ g.z])
        x = np.concatenate([x, x ^ g.x])
    lz, lx = code.logical_z, code.logical_x
    counts = np.zeros(n + 1, dtype=np.int64)
    for rz, rx in ((lz.z, lz.x), (lx.z, lx.x), (lz.z ^ lx.z, lz.x ^ lx.x)):
        support = (z ^ rz) | (x ^ rx)
        weights = _popcount(support)
        counts += np.bincount(weights, minlength=n + 1)
    return WeightEnumerator([int(c) for c in counts])


def _popcount(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.uint64)
    out = np.zeros(a.shape, dtype=np.int64)
    while a.any():
        out += (a & np.uint64(1)).astype(np.int64)
        a >>= np.uint64(1)
    return out


def logical_census(code: StabilizerCode, weights=(3, 4)) -> dict[int, int]:
    """Number of nontrivial logical operators at each requested weight."""
    L = weight_enumerator(code).coefficients
    return {w: L[w] for w in weights}


def stabilizer_rank(code: StabilizerCode) -> int:
    return gf2_rank(g.z | (g.x << code.n) for g in code.generators)
