"""Independent asymmetric Pauli channel.

The channel is parametrised by the total error probability ``p`` and the
asymmetry ``A = 2 p_z / (p - p_z)``; X and Y share the remainder equally, so
``p_z = A p / (A + 2)`` and ``p_x = p_y = p / (A + 2)``.  ``A = 1`` is the
depolarizing channel and ``A = inf`` the phase-flip channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import numpy as np

from .pauli import PauliOperator


@dataclass(frozen=True)
class ChannelModel:
    p: float
    A: float
    p_x: float
    p_y: float
    p_z: float

    @classmethod
    def from_probabilities(cls, p_x: float, p_y: float, p_z: float) -> "ChannelModel":
        """Channel with explicit per-Pauli probabilities (no equal X/Y split)."""
        for v in (p_x, p_y, p_z):
            if v < 0:
                raise ValueError("probabilities must be non-negative")
        p = p_x + p_y + p_z
        if p >= 1:
            raise ValueError(f"total error probability must be < 1, got {p}")
        A = math.inf if p == p_z else 2 * p_z / (p - p_z)
        return cls(p, A, p_x, p_y, p_z)

    @property
    def probabilities(self) -> tuple[float, float, float]:
        """``(p_x, p_y, p_z)``."""
        return (self.p_x, self.p_y, self.p_z)


def make_channel(p: float, A: float) -> ChannelModel:
    if not 0 <= p < 1:
        raise ValueError(f"p must lie in [0, 1), got {p}")
    if not A > 0:
        raise ValueError(f"asymmetry must be positive, got {A}")
    if math.isinf(A):
        return ChannelModel(p, math.inf, 0.0, 0.0, p)
    p_z = A * p / (A + 2)
    p_xy = p / (A + 2)
    return ChannelModel(p, float(A), p_xy, p_xy, p_z)


def depolarizing(p: float) -> ChannelModel:
    return make_channel(p, 1.0)


def phase_flip(p: float) -> ChannelModel:
    return make_channel(p, math.inf)


def parse_asymmetry(text: str) -> float:
    """Parse ``"inf"``/``"infinity"`` or a positive float."""
    value = float(text)
    if not value > 0:
        raise ValueError(f"asymmetry must be positive, got {text!r}")
    return value


def sample_error(ch: ChannelModel, n: int, rng: np.random.Generator) -> PauliOperator:
    """One error pattern; each qubit independently gets X/Y/Z/I."""
    u = rng.random(n)
    x_only = u < ch.p_x
    y = (u >= ch.p_x) & (u < ch.p_x + ch.p_y)
    z_only = (u >= ch.p_x + ch.p_y) & (u < ch.p)
    return PauliOperator.from_arrays((y | z_only).astype(np.uint8), (y | x_only).astype(np.uint8))


def sample_errors(ch: ChannelModel, n: int, trials: int, rng: np.random.Generator):
    """Sample ``trials`` error patterns in sparse form.

    Faulty sites are located with geometric gaps over the flattened
    ``trials * n`` sites, which is exact for the i.i.d. channel and cheap when
    ``p`` is small.  Returns ``(trial, qubit, pauli)`` arrays where ``pauli``
    is 1 = X, 2 = Z, 3 = Y (bit 1 = Z component, bit 0 = X component).
    """
    total = trials * n
    if ch.p == 0 or total == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, np.zeros(0, dtype=np.uint8)
    if ch.p > 0.05:
        u = rng.random((trials, n))
        hit = u < ch.p
        t_idx, q_idx = np.nonzero(hit)
        w = u[hit] / ch.p
    else:
        chunks = []
        pos = -1
        while True:
            expected = int((total - pos) * ch.p * 1.1) + 64
            gaps = rng.geometric(ch.p, size=expected)
            sites = pos + np.cumsum(gaps)
            keep = sites < total
            chunks.append(sites[keep])
            if not keep.all():
                break
            pos = int(sites[-1])
        flat = np.concatenate(chunks)
        t_idx, q_idx = np.divmod(flat, n)
        w = rng.random(len(flat))
    px, py = ch.p_x / ch.p, ch.p_y / ch.p
    pauli = np.full(len(w), 2, dtype=np.uint8)
    pauli[w < px + py] = 3
    pauli[w < px] = 1
    return t_idx.astype(np.int64), q_idx.astype(np.int64), pauli


def class_weight(ch: ChannelModel, j: int, i: int, l: int) -> float:
    """Probability mass of weight-``j`` patterns with ``i`` Z's, ``l`` X's (rest Y).

    ``C(j, i) p_z^i C(j - i, l) p_x^l p_y^(j - i - l)``; summing over all
    ``(i, l)`` gives ``p^j``.
    """
    if not (0 <= i <= j and 0 <= l <= j - i):
        raise ValueError(f"invalid class (j={j}, i={i}, l={l})")
    return comb(j, i) * ch.p_z**i * comb(j - i, l) * ch.p_x**l * ch.p_y ** (j - i - l)
