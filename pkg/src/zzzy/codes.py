"""Planar (non-rotated) surface, ZZZY, dual ZZZY and XZZX codes.

Lattice layout for distance ``d``: ``d`` full rows of ``d`` qubits interleaved
with ``d - 1`` half rows of ``d - 1`` qubits, numbered row-major.  For d = 3::

    1   2   3          full row 0
      4   5            half row 0
    6   7   8          full row 1
      9  10            half row 1
   11  12  13          full row 2

In doubled coordinates a full-row qubit ``(R, c)`` sits at ``(2R, 2c)`` and a
half-row qubit ``(h, c)`` at ``(2h + 1, 2c + 1)``.  Vertex sites ``(2R, 2c + 1)``
carry the X-type checks and plaquette sites ``(2h + 1, 2c)`` the Z-type checks.
Generator labels ``G1, G2, ...`` enumerate the sites row-major, so d = 3 gives
X1 X2 X4 as G1 and Z1 Z4 Z6 as G3.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .pauli import PauliOperator, commutes, compose

FAMILIES = ("surface", "zzzy", "zzzy-dual", "xzzx")


@dataclass(frozen=True, eq=False)
class StabilizerCode:
    """A planar ``[[n, 1, d]]`` stabilizer code plus decoder metadata.

    Rows of ``H`` are ordered ZY generators first, then the remaining
    Z-type generators, then X-type generators.  ``labels[i]`` is the
    row-major site label of row ``i`` (the ``G`` number used in text dumps).
    """

    family: str
    d: int
    n: int
    generators: tuple[PauliOperator, ...]
    labels: tuple[int, ...]
    n_zy: int
    n_x: int
    logical_z: PauliOperator
    logical_x: PauliOperator
    # (lattice_row, column) per qubit; even lattice rows are full rows
    qubit_coords: tuple[tuple[int, int], ...]
    # doubled-coordinate site of every generator row
    sites: tuple[tuple[int, int], ...]
    h_map: dict[int, int] = field(default_factory=dict)
    g_map: dict[int, tuple[int, ...]] = field(default_factory=dict)
    # generator row -> assigned full-row index (X-type rows only)
    x_row_of: dict[int, int] = field(default_factory=dict)
    # for zzzy-dual: the primal code this one is the transposed Hadamard image of
    dual_of: Optional["StabilizerCode"] = None

    @property
    def k(self) -> int:
        return 1

    @property
    def r(self) -> int:
        return len(self.generators)

    @property
    def t(self) -> int:
        return (self.d - 1) // 2

    @property
    def H(self) -> np.ndarray:
        return np.array([g.to_symplectic() for g in self.generators], dtype=np.uint8)

    @property
    def z_rows(self) -> range:
        """Rows of the Z-type block (ZY plus pure Z)."""
        return range(0, self.r - self.n_x)

    @property
    def x_rows(self) -> range:
        return range(self.r - self.n_x, self.r)

    @property
    def y_qubits(self) -> list[int]:
        return sorted(set(self.h_map.values()))

    def full_row(self, q: int) -> Optional[int]:
        lr, _ = self.qubit_coords[q]
        return lr // 2 if lr % 2 == 0 else None

    def label(self, row: int) -> str:
        return f"G{self.labels[row]}"

    def row_of_label(self, label: int) -> int:
        return self.labels.index(label)

    def dump(self) -> str:
        """Text listing: header then one ``G<label>: <factors>`` line per generator."""
        lines = [f"[[{self.n},{self.k},{self.d}]] family={self.family}"]
        for row in sorted(range(self.r), key=lambda i: self.labels[i]):
            lines.append(f"{self.label(row)}: {self.generators[row]}")
        return "\n".join(lines)


# -- lattice helpers ---------------------------------------------------------


def _check_distance(d) -> None:
    if not isinstance(d, (int, np.integer)) or isinstance(d, bool):
        raise ValueError(f"distance must be an integer, got {d!r}")
    if d < 3 or d % 2 == 0:
        raise ValueError(f"distance must be odd and >= 3, got {d}")


def _full(d: int, R: int, c: int) -> int:
    return R * (2 * d - 1) + c


def _half(d: int, h: int, c: int) -> int:
    return h * (2 * d - 1) + d + c


def _coords(d: int) -> list[tuple[int, int]]:
    out = []
    for lr in range(2 * d - 1):
        width = d if lr % 2 == 0 else d - 1
        out.extend((lr, c) for c in range(width))
    return out


def _doubled(d: int, q: int) -> tuple[int, int]:
    lr, c = _coords(d)[q]
    return (lr, 2 * c) if lr % 2 == 0 else (lr, 2 * c + 1)


def _qubit_at(d: int, pos: tuple[int, int]) -> int:
    row, col = pos
    if row % 2 == 0:
        return _full(d, row // 2, col // 2)
    return _half(d, row // 2, col // 2)


def _vertex_support(d: int, R: int, c: int) -> tuple[list[int], list[int]]:
    """(horizontal, vertical) neighbours of vertex site (R, c)."""
    horiz = [_full(d, R, c), _full(d, R, c + 1)]
    vert = []
    if R >= 1:
        vert.append(_half(d, R - 1, c))
    if R <= d - 2:
        vert.append(_half(d, R, c))
    return horiz, vert


def _plaquette_support(d: int, h: int, c: int) -> tuple[list[int], list[int]]:
    horiz = []
    if c >= 1:
        horiz.append(_half(d, h, c - 1))
    if c <= d - 2:
        horiz.append(_half(d, h, c))
    vert = [_full(d, h, c), _full(d, h + 1, c)]
    return horiz, vert


def _sites(d: int) -> list[tuple[str, tuple[int, int], tuple[int, int]]]:
    """Every check site in row-major order: (kind, lattice index, doubled coords)."""
    out = []
    for lr in range(2 * d - 1):
        if lr % 2 == 0:
            R = lr // 2
            out.extend(("vertex", (R, c), (lr, 2 * c + 1)) for c in range(d - 1))
        else:
            h = lr // 2
            out.extend(("plaquette", (h, c), (lr, 2 * c)) for c in range(d))
    return out


def _y_designated(d: int) -> list[int]:
    """Full-row qubits whose Z measurements become Y in the ZZZY construction.

    Columns {0, d-1} on even full rows and {1, d-2} on odd full rows.
    """
    even_cols = {0, d - 1}
    odd_cols = {1, d - 2}
    assert not even_cols & odd_cols
    out = []
    for R in range(d):
        cols = even_cols if R % 2 == 0 else odd_cols
        out.extend(_full(d, R, c) for c in sorted(cols))
    return out


def _assemble(
    family: str,
    d: int,
    site_ops: list[tuple[str, tuple[int, int], PauliOperator, int]],
    logical_z: PauliOperator,
    logical_x: PauliOperator,
    zy_label_to_qubit: dict[int, int],
) -> StabilizerCode:
    """Order rows (ZY, Z, X), then fill h_map, g_map and row assignments.

    ``site_ops`` entries are ``(block, doubled_site, operator, label)`` with
    block one of ``"zy"``, ``"z"``, ``"x"``.
    """
    n = d * d + (d - 1) * (d - 1)
    order = {"zy": 0, "z": 1, "x": 2}
    ordered = sorted(site_ops, key=lambda e: (order[e[0]], e[3]))
    generators = tuple(e[2] for e in ordered)
    labels = tuple(e[3] for e in ordered)
    sites = tuple(e[1] for e in ordered)
    n_zy = sum(1 for e in ordered if e[0] == "zy")
    n_x = sum(1 for e in ordered if e[0] == "x")

    x_row_of = {}
    for row, e in enumerate(ordered):
        if e[0] == "x":
            x_row_of[row] = e[1][0] // 2
    h_map = {labels.index(lab): q for lab, q in zy_label_to_qubit.items()}

    coords = _coords(d)
    g_map = {}
    for q, (lr, _) in enumerate(coords):
        if lr % 2:
            continue
        R = lr // 2
        g_map[q] = tuple(row for row, xr in x_row_of.items() if abs(xr - R) == 1)

    return StabilizerCode(
        family=family,
        d=d,
        n=n,
        generators=generators,
        labels=labels,
        n_zy=n_zy,
        n_x=n_x,
        logical_z=logical_z,
        logical_x=logical_x,
        qubit_coords=tuple(coords),
        sites=sites,
        h_map=h_map,
        g_map=g_map,
        x_row_of=x_row_of,
    )


def _top_row_z(d: int, n: int, y_qubits=()) -> PauliOperator:
    factors = [("Y" if _full(d, 0, c) in y_qubits else "Z", _full(d, 0, c)) for c in range(d)]
    return PauliOperator.from_factors(n, factors)


def _left_column_x(d: int, n: int) -> PauliOperator:
    return PauliOperator.from_factors(n, [("X", _full(d, R, 0)) for R in range(d)])


# -- builders ----------------------------------------------------------------


def _surface_like(d: int, y_qubits: set[int], family: str) -> StabilizerCode:
    n = d * d + (d - 1) * (d - 1)
    site_ops = []
    zy_map = {}
    for label, (kind, (a, b), pos) in enumerate(_sites(d), start=1):
        if kind == "vertex":
            horiz, vert = _vertex_support(d, a, b)
            op = PauliOperator.from_factors(n, [("X", q) for q in horiz + vert])
            site_ops.append(("x", pos, op, label))
        else:
            horiz, vert = _plaquette_support(d, a, b)
            ys = [q for q in horiz + vert if q in y_qubits]
            # a plaquette never touches two designated qubits
            assert len(ys) <= 1, (label, ys)
            op = PauliOperator.from_factors(
                n, [("Y" if q in y_qubits else "Z", q) for q in horiz + vert]
            )
            if ys:
                zy_map[label] = ys[0]
            site_ops.append(("zy" if ys else "z", pos, op, label))
    logical_z = _top_row_z(d, n, y_qubits)
    logical_x = _left_column_x(d, n)
    return _assemble(family, d, site_ops, logical_z, logical_x, zy_map)


def build_surface(d: int) -> StabilizerCode:
    """Standard CSS planar surface code of distance ``d``."""
    _check_distance(d)
    return _surface_like(d, set(), "surface")


def build_zzzy(d: int) -> StabilizerCode:
    """Surface code with single Z -> Y substitutions at the designated qubits.

    Every Z-type generator measuring a designated qubit measures Y on it
    instead, giving 3(d-1) substitutions for d = 3 and 4(d-1) otherwise.
    """
    _check_distance(d)
    return _surface_like(d, set(_y_designated(d)), "zzzy")


def _transpose_hadamard(d: int, op: PauliOperator) -> PauliOperator:
    factors = []
    for q in op.support:
        row, col = _doubled(d, q)
        letter = {"X": "Z", "Z": "X", "Y": "Y"}[op.letter(q)]
        factors.append((letter, _qubit_at(d, (col, row))))
    return PauliOperator.from_factors(op.n, factors)


def dual_map(d: int, op: PauliOperator) -> PauliOperator:
    """Lattice transpose combined with X <-> Z exchange (an involution)."""
    return _transpose_hadamard(d, op)


def build_zzzy_dual(d: int) -> StabilizerCode:
    """ZZZY construction for bit-flip-dominated noise.

    Obtained from :func:`build_zzzy` by transposing the lattice and
    exchanging X and Z.  Row ``i`` of the result is the image of row ``i`` of
    the primal code, so syndromes carry over bit for bit.
    """
    _check_distance(d)
    primal = build_zzzy(d)
    gens = tuple(_transpose_hadamard(d, g) for g in primal.generators)
    sites = tuple((col, row) for row, col in primal.sites)
    site_label = {pos: lab for lab, (_, _, pos) in enumerate(_sites(d), start=1)}
    labels = tuple(site_label[s] for s in sites)
    t = {q: _qubit_at(d, _doubled(d, q)[::-1]) for q in range(primal.n)}
    coords = _coords(d)
    return StabilizerCode(
        family="zzzy-dual",
        d=d,
        n=primal.n,
        generators=gens,
        labels=labels,
        n_zy=primal.n_zy,
        n_x=primal.n_x,
        logical_z=_transpose_hadamard(d, primal.logical_x),
        logical_x=_transpose_hadamard(d, primal.logical_z),
        qubit_coords=tuple(coords),
        sites=sites,
        h_map={row: t[q] for row, q in primal.h_map.items()},
        g_map={t[q]: rows for q, rows in primal.g_map.items()},
        x_row_of=dict(primal.x_row_of),
        dual_of=primal,
    )


def build_xzzx(d: int) -> StabilizerCode:
    """XZZX code: every check is X on horizontal and Z on vertical neighbours.

    Plaquette-site checks come first in ``H`` and vertex-site checks last
    (``n_x`` counts the vertex-site block).  ``n_zy`` is 0.
    """
    _check_distance(d)
    n = d * d + (d - 1) * (d - 1)
    site_ops = []
    for label, (kind, (a, b), pos) in enumerate(_sites(d), start=1):
        if kind == "vertex":
            horiz, vert = _vertex_support(d, a, b)
            block = "x"
        else:
            horiz, vert = _plaquette_support(d, a, b)
            block = "z"
        op = PauliOperator.from_factors(n, [("X", q) for q in horiz] + [("Z", q) for q in vert])
        site_ops.append((block, pos, op, label))
    return _assemble("xzzx", d, site_ops, _top_row_z(d, n), _left_column_x(d, n), {})


def build_code(family: str, d: int) -> StabilizerCode:
    builders = {
        "surface": build_surface,
        "zzzy": build_zzzy,
        "zzzy-dual": build_zzzy_dual,
        "xzzx": build_xzzx,
    }
    if family not in builders:
        raise ValueError(f"unknown code family {family!r}; expected one of {FAMILIES}")
    return builders[family](d)


# -- validation --------------------------------------------------------------


def gf2_rank(rows) -> int:
    """Rank over GF(2) of integer bitmask rows."""
    pivots: dict[int, int] = {}
    rank = 0
    for v in rows:
        v = int(v)
        while v:
            top = v.bit_length() - 1
            if top in pivots:
                v ^= pivots[top]
            else:
                pivots[top] = v
                rank += 1
                break
    return rank


def _symplectic_int(op: PauliOperator) -> int:
    return op.z | (op.x << op.n)


def validate(code: StabilizerCode) -> list[str]:
    """Check the structural invariants of ``code``; returns violations (empty if fine)."""
    problems = []
    gens = code.generators
    n = code.n
    if n != code.d**2 + (code.d - 1) ** 2:
        problems.append(f"n={n} does not match d={code.d}")
    if code.r != n - 1:
        problems.append(f"expected {n - 1} generators, found {code.r}")
    for i, j in itertools.combinations(range(code.r), 2):
        if not commutes(gens[i], gens[j]):
            problems.append(f"{code.label(i)} and {code.label(j)} anticommute")
    rank = gf2_rank(_symplectic_int(g) for g in gens)
    if rank != n - 1:
        problems.append(f"generator rank {rank} != {n - 1}")
    for name, op in (("logical_z", code.logical_z), ("logical_x", code.logical_x)):
        for i, g in enumerate(gens):
            if not commutes(op, g):
                problems.append(f"{name} anticommutes with {code.label(i)}")
    if commutes(code.logical_z, code.logical_x):
        problems.append("logical_z and logical_x commute")

    for i in range(code.n_zy):
        g = gens[i]
        ys = (g.z & g.x).bit_count()
        if ys != 1:
            problems.append(f"ZY row {code.label(i)} has {ys} Y factors")
        if code.h_map.get(i) is None or g.letter(code.h_map[i]) != "Y":
            problems.append(f"h_map wrong for {code.label(i)}")
    if code.family in ("zzzy", "zzzy-dual"):
        expected = 3 * (code.d - 1) if code.d == 3 else 4 * (code.d - 1)
        if code.n_zy != expected:
            problems.append(f"{code.n_zy} ZY generators, expected {expected}")
        subs = sum((g.z & g.x).bit_count() for g in gens)
        if subs != expected:
            problems.append(f"{subs} Y substitutions, expected {expected}")
        for row, q in code.h_map.items():
            R = _row_index(code, q)
            for xr in code.g_map.get(q, ()):
                if abs(code.x_row_of[xr] - R) != 1:
                    problems.append(f"g_map of qubit {q + 1} lists non-adjacent row {code.label(xr)}")
        for q, rows in code.g_map.items():
            R = _row_index(code, q)
            boundary = R in (0, code.d - 1)
            want = (code.d - 1) * (1 if boundary else 2)
            if len(rows) != want:
                problems.append(f"g_map of qubit {q + 1} has {len(rows)} entries, expected {want}")

    if code.d == 3:
        problems.extend(_low_weight_logicals(code, 2))
    return problems


def _row_index(code: StabilizerCode, q: int) -> int:
    if code.dual_of is not None:
        # full rows of the primal become full columns after the transpose
        lr, c = code.qubit_coords[q]
        return c
    return code.full_row(q)


def _low_weight_logicals(code: StabilizerCode, wmax: int) -> list[str]:
    out = []
    for w in range(1, wmax + 1):
        for qubits in itertools.combinations(range(code.n), w):
            for letters in itertools.product("XYZ", repeat=w):
                e = PauliOperator.from_factors(code.n, zip(letters, qubits))
                if all(commutes(e, g) for g in code.generators):
                    if not (commutes(e, code.logical_x) and commutes(e, code.logical_z)):
                        out.append(f"undetectable logical of weight {w}: {e}")
    return out


def stabilizer_element(code: StabilizerCode, mask: int) -> PauliOperator:
    """Product of the generator rows selected by the bits of ``mask``."""
    op = PauliOperator.identity(code.n)
    i = 0
    while mask:
        if mask & 1:
            op = compose(op, code.generators[i])
        mask >>= 1
        i += 1
    return op
