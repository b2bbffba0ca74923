"""Phaseless Pauli operators in binary symplectic form.

Each operator keeps two bitmasks over the qubits: bit ``j`` of ``z`` is set
when qubit ``j`` carries a Z component and bit ``j`` of ``x`` when it carries
an X component, so Y sets both.  Qubits are 0-based internally and 1-based in
the text form (``"Z1 Z4 Y7"``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

import numpy as np

_FACTOR = re.compile(r"^([XYZ])(\d+)$")


@dataclass(frozen=True)
class PauliOperator:
    """An ``n``-qubit Pauli operator without phase."""

    n: int
    z: int = 0
    x: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"qubit count must be >= 1, got {self.n}")
        limit = 1 << self.n
        if not (0 <= self.z < limit and 0 <= self.x < limit):
            raise ValueError("bitmask exceeds qubit count")

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n)

    @classmethod
    def from_factors(cls, n: int, factors: Iterable[tuple[str, int]]) -> "PauliOperator":
        """Build from ``(letter, qubit)`` pairs with 0-based qubit indices.

        Repeated qubits multiply (phase dropped), e.g. Z then X gives Y.
        """
        z = x = 0
        for letter, q in factors:
            if not 0 <= q < n:
                raise ValueError(f"qubit {q} out of range for n={n}")
            if letter in ("Z", "Y"):
                z ^= 1 << q
            if letter in ("X", "Y"):
                x ^= 1 << q
            if letter not in ("X", "Y", "Z", "I"):
                raise ValueError(f"unknown Pauli letter {letter!r}")
        return cls(n, z, x)

    @classmethod
    def from_string(cls, n: int, text: str) -> "PauliOperator":
        """Parse text like ``"Z2 Z3"`` or ``"Y7"`` (1-based); ``"I"`` is identity."""
        text = text.strip()
        if text in ("", "I"):
            return cls(n)
        factors = []
        for token in text.replace(",", " ").split():
            m = _FACTOR.match(token)
            if m is None:
                raise ValueError(f"cannot parse Pauli factor {token!r}")
            factors.append((m.group(1), int(m.group(2)) - 1))
        return cls.from_factors(n, factors)

    @classmethod
    def from_arrays(cls, z_part, x_part) -> "PauliOperator":
        z_part = np.asarray(z_part, dtype=np.uint8)
        x_part = np.asarray(x_part, dtype=np.uint8)
        if z_part.shape != x_part.shape or z_part.ndim != 1:
            raise ValueError("z_part and x_part must be 1-d and of equal length")
        return cls(len(z_part), _pack(z_part), _pack(x_part))

    @classmethod
    def from_symplectic(cls, vec) -> "PauliOperator":
        """Inverse of :meth:`to_symplectic` (``[z | x]`` layout)."""
        vec = np.asarray(vec, dtype=np.uint8)
        n = len(vec) // 2
        if len(vec) != 2 * n:
            raise ValueError("symplectic vector must have even length")
        return cls.from_arrays(vec[:n], vec[n:])

    # -- views ------------------------------------------------------------

    @property
    def z_part(self) -> np.ndarray:
        return _unpack(self.z, self.n)

    @property
    def x_part(self) -> np.ndarray:
        return _unpack(self.x, self.n)

    def to_symplectic(self) -> np.ndarray:
        return np.concatenate([self.z_part, self.x_part])

    @property
    def weight(self) -> int:
        return (self.z | self.x).bit_count()

    @property
    def support(self) -> list[int]:
        return _bits(self.z | self.x)

    def letter(self, q: int) -> str:
        zb = (self.z >> q) & 1
        xb = (self.x >> q) & 1
        return "IXZY"[zb * 2 + xb]

    def is_identity(self) -> bool:
        return self.z == 0 and self.x == 0

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return compose(self, other)

    def __str__(self) -> str:
        if self.is_identity():
            return "I"
        return " ".join(f"{self.letter(q)}{q + 1}" for q in self.support)


def _pack(bits: np.ndarray) -> int:
    value = 0
    for j in np.flatnonzero(bits):
        value |= 1 << int(j)
    return value


def _unpack(value: int, n: int) -> np.ndarray:
    return np.array([(value >> j) & 1 for j in range(n)], dtype=np.uint8)


def _bits(value: int) -> list[int]:
    out = []
    j = 0
    while value:
        if value & 1:
            out.append(j)
        value >>= 1
        j += 1
    return out


def _check_lengths(a: PauliOperator, b: PauliOperator) -> None:
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} vs {b.n}")


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    """True iff the symplectic product of ``a`` and ``b`` vanishes."""
    _check_lengths(a, b)
    return ((a.z & b.x) ^ (a.x & b.z)).bit_count() % 2 == 0


def compose(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Phaseless product: XOR of both parts."""
    _check_lengths(a, b)
    return PauliOperator(a.n, a.z ^ b.z, a.x ^ b.x)


def pauli_class(e: PauliOperator) -> tuple[int, int, int]:
    """Return ``(#Z, #X, #Y)`` of ``e``."""
    ys = (e.z & e.x).bit_count()
    return (e.z.bit_count() - ys, e.x.bit_count() - ys, ys)


def syndrome(code, e: PauliOperator) -> np.ndarray:
    """Syndrome bits of ``e`` against the generator rows of ``code``.

    Bit ``i`` is 1 iff ``e`` anticommutes with row ``i`` of ``code.H``.
    """
    if e.n != code.n:
        raise ValueError(f"length mismatch: error has {e.n} qubits, code has {code.n}")
    return np.array([0 if commutes(e, g) else 1 for g in code.generators], dtype=np.uint8)


def symplectic_syndromes(H: np.ndarray, z_parts: np.ndarray, x_parts: np.ndarray) -> np.ndarray:
    """Vectorised syndromes for a batch of errors.

    ``z_parts``/``x_parts`` have shape ``(batch, n)``; the result has shape
    ``(batch, r)`` with entries in {0, 1}.
    """
    n = H.shape[1] // 2
    hz = H[:, :n].astype(np.int32)
    hx = H[:, n:].astype(np.int32)
    s = z_parts.astype(np.int32) @ hx.T + x_parts.astype(np.int32) @ hz.T
    return (s & 1).astype(np.uint8)
