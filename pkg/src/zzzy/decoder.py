"""Two-pass matching decoders for surface, XZZX and ZZZY codes.

Every code is decoded in two passes.  The primary pass matches the checks
that detect the favoured error type (Z errors for surface and ZZZY codes, X
errors for the dual ZZZY code, Z-on-full / X-on-half for XZZX) and the
secondary pass matches the remaining checks.  For ZZZY codes the primary
pass runs on weights adjusted by :func:`update_weights`, and before the
secondary pass every ZY check whose Y-measured qubit received a primary
correction has its syndrome bit toggled, so the secondary pass only sees
what the primary correction leaves unexplained.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .codes import StabilizerCode
from .matching import CheckGraph, PathTree, shortest_paths, solve_pairing
from .pauli import PauliOperator, commutes, compose
from .pauli import syndrome as measure

W_ON = 0.9
W_OFF = 1.1
W_FORCE = -0.1


class Outcome(enum.Enum):
    NO_ERROR = "no_error"
    LOGICAL_X = "logical_X"
    LOGICAL_Z = "logical_Z"
    LOGICAL_Y = "logical_Y"
    SYNDROME_MISMATCH = "syndrome_mismatch"

    @property
    def is_failure(self) -> bool:
        return self is not Outcome.NO_ERROR


@dataclass
class PassResult:
    """One matching pass: highlighted rows, their pairing and the correction.

    ``pairing`` holds ``(row, partner_row)`` tuples, ``partner_row`` being
    ``None`` for a match to the boundary.  ``correction`` is a qubit bitmask.
    """

    highlighted: tuple[int, ...]
    pairing: tuple[tuple[int, Optional[int]], ...]
    correction: int
    cost: float


@dataclass
class DecodeResult:
    e_hat: PauliOperator
    weights: np.ndarray
    syndrome: np.ndarray
    flipped: np.ndarray
    primary: PassResult
    secondary: PassResult
    flipped_rows: tuple[int, ...] = field(default_factory=tuple)
    fallback: bool = False


def update_weights(s, q, code: StabilizerCode, counter: Optional[dict] = None) -> np.ndarray:
    """Adjust per-qubit edge weights from the ZY syndrome bits.

    A Y-measured qubit is active when every ZY check measuring Y on it fired
    and inactive when none did; active qubits get 0.9, inactive ones 1.1.
    A qubit shared by two ZY checks of which only one fired keeps weight 1.0
    (a Z error there would flip both).  An active qubit with no firing X
    check in the adjacent full rows (its ``g_map`` list) is forced to -0.1.

    ``counter``, if given, accumulates ``row_visits`` and ``g_checks`` as a
    cost proxy.
    """
    s = np.asarray(s)
    q = np.array(q, dtype=float, copy=True)
    fired: dict[int, list[int]] = {}
    visits = 0
    for i in range(code.n_zy):
        visits += 1
        tally = fired.setdefault(code.h_map[i], [0, 0])
        tally[0] += 1
        tally[1] += int(s[i])
    checks = 0
    for j, (owners, on) in fired.items():
        if on == 0:
            q[j] = W_OFF
        elif on < owners:
            q[j] = 1.0
        else:
            q[j] = W_ON
            isolated = True
            for x in code.g_map[j]:
                checks += 1
                if s[x]:
                    isolated = False
                    break
            if isolated:
                q[j] = W_FORCE
    if counter is not None:
        counter["row_visits"] = counter.get("row_visits", 0) + visits
        counter["g_checks"] = counter.get("g_checks", 0) + checks
    return q


def pass_letters(code: StabilizerCode) -> tuple[str, ...]:
    """Pauli letter matched by the primary pass on each qubit."""
    if code.family == "zzzy-dual":
        return ("X",) * code.n
    if code.family == "xzzx":
        return tuple("Z" if lr % 2 == 0 else "X" for lr, _ in code.qubit_coords)
    return ("Z",) * code.n


def _graph(code: StabilizerCode, rows, letters) -> CheckGraph:
    node = {r: i for i, r in enumerate(rows)}
    boundary = len(rows)
    edges = []
    for qb, letter in enumerate(letters):
        bit = 1 << qb
        hit = []
        for r in rows:
            g = code.generators[r]
            anti = (g.x & bit) if letter == "Z" else (g.z & bit)
            if anti:
                hit.append(node[r])
        if len(hit) == 1:
            edges.append((hit[0], boundary))
        elif len(hit) == 2:
            edges.append((hit[0], hit[1]))
        else:
            raise ValueError(f"qubit {qb + 1} flips {len(hit)} checks of one pass")
    return CheckGraph(rows, edges)


class MatchingDecoder:
    """Decoder bound to one code, with per-syndrome memoisation.

    Parameters
    ----------
    code : StabilizerCode
    use_weights : bool
        Apply :func:`update_weights` before the primary pass (only matters
        for codes with ZY checks).
    tie_rng : numpy.random.Generator, optional
        If given, every decode adds independent jitter in ``[0, 1e-6)`` to
        each qubit weight of both passes, so ties between equal-cost paths
        and pairings are broken at random.  Memoisation is then disabled.
    safeguard : bool
        With weights in use, also decode with uniform weights and keep that
        correction instead when it is strictly lighter and has weight at most
        ``t``.  The weight hints read every fired ZY check as evidence for its
        Y qubit, which some Y errors on neighbouring qubits contradict; the
        fallback restores correction of all errors up to weight ``t``.
    """

    JITTER = 1e-6

    def __init__(self, code: StabilizerCode, use_weights: bool = True, tie_rng=None, safeguard: bool = True):
        self.code = code
        self.use_weights = use_weights and code.n_zy > 0
        self.tie_rng = tie_rng
        self.safeguard = safeguard and self.use_weights
        self._plain = MatchingDecoder(code, False, tie_rng) if self.safeguard else None
        letters = pass_letters(code)
        other = tuple("X" if c == "Z" else "Z" for c in letters)
        self.primary_letters = letters
        self.secondary_letters = other
        self.primary_rows = tuple(code.x_rows)
        self.secondary_rows = tuple(code.z_rows)
        self.primary_graph = _graph(code, self.primary_rows, letters)
        self.secondary_graph = _graph(code, self.secondary_rows, other)
        self._uniform_trees: dict[int, dict[int, PathTree]] = {0: {}, 1: {}}
        self._primary_cache: dict[bytes, tuple] = {}
        self._secondary_cache: dict[bytes, PassResult] = {}
        self._primary_z = np.array([c == "Z" for c in letters])
        zy_qubit = np.zeros(code.n_zy, dtype=np.int64)
        for i, j in code.h_map.items():
            zy_qubit[i] = j
        self._zy_qubit = zy_qubit

    # -- passes ------------------------------------------------------------

    def _jitter(self, weights):
        if self.tie_rng is None:
            return weights
        base = np.ones(self.code.n) if weights is None else weights
        return base + self.tie_rng.uniform(0, self.JITTER, self.code.n)

    def _tree(self, which: int, graph: CheckGraph, node: int, weights) -> PathTree:
        if weights is None:
            cache = self._uniform_trees[which]
            if node not in cache:
                cache[node] = shortest_paths(graph, node, np.ones(self.code.n))
            return cache[node]
        return shortest_paths(graph, node, weights)

    def _match(self, which: int, graph: CheckGraph, bits, weights) -> PassResult:
        nodes = [i for i, b in enumerate(bits) if b]
        k = len(nodes)
        if k == 0:
            return PassResult((), (), 0, 0.0)
        trees = [self._tree(which, graph, v, weights) for v in nodes]
        pair_cost = np.full((k, k), np.inf)
        boundary_cost = np.empty(k)
        for a, tree in enumerate(trees):
            boundary_cost[a] = tree.dist[graph.boundary]
            for b in range(k):
                if a != b:
                    pair_cost[a, b] = tree.dist[nodes[b]]
        pair_cost = np.minimum(pair_cost, pair_cost.T)
        partner = solve_pairing(pair_cost, boundary_cost)
        correction = 0
        pairing = []
        cost = 0.0
        for a, b in enumerate(partner):
            if b is None:
                correction ^= trees[a].path[graph.boundary]
                pairing.append((graph.rows[nodes[a]], None))
                cost += boundary_cost[a]
            elif a < b:
                correction ^= trees[a].path[nodes[b]]
                pairing.append((graph.rows[nodes[a]], graph.rows[nodes[b]]))
                cost += pair_cost[a, b]
        return PassResult(tuple(graph.rows[v] for v in nodes), tuple(pairing), correction, cost)

    def _primary(self, s: np.ndarray):
        code = self.code
        key = s[list(self.primary_rows)].tobytes() + s[: code.n_zy].tobytes()
        hit = self._primary_cache.get(key)
        if hit is not None and self.tie_rng is None:
            return hit
        if self.use_weights:
            q = update_weights(s, np.ones(code.n), code)
            weights = q
        else:
            q = np.ones(code.n)
            weights = None
        weights = self._jitter(weights)
        result = self._match(0, self.primary_graph, s[list(self.primary_rows)], weights)
        flipped_rows = tuple(
            i for i in range(code.n_zy) if (result.correction >> code.h_map[i]) & 1
        )
        out = (result, q, flipped_rows)
        self._primary_cache[key] = out
        return out

    def _secondary(self, s: np.ndarray) -> PassResult:
        bits = s[list(self.secondary_rows)]
        key = bits.tobytes()
        if self.tie_rng is not None:
            return self._match(1, self.secondary_graph, bits, self._jitter(None))
        hit = self._secondary_cache.get(key)
        if hit is None:
            hit = self._match(1, self.secondary_graph, bits, None)
            self._secondary_cache[key] = hit
        return hit

    # -- public ------------------------------------------------------------

    def decode(self, s) -> DecodeResult:
        s = np.asarray(s, dtype=np.uint8)
        if s.shape != (self.code.r,):
            raise ValueError(f"syndrome must have {self.code.r} bits, got shape {s.shape}")
        primary, q, flipped_rows = self._primary(s)
        flipped = s.copy()
        for i in flipped_rows:
            flipped[i] ^= 1
        secondary = self._secondary(flipped)
        e_hat = self._assemble(primary.correction, secondary.correction)
        result = DecodeResult(e_hat, q, s, flipped, primary, secondary, flipped_rows)
        if self._plain is not None:
            alt = self._plain.decode(s)
            if alt.e_hat.weight < e_hat.weight and alt.e_hat.weight <= self.code.t:
                return replace(alt, fallback=True)
        return result

    def correction(self, s) -> PauliOperator:
        return self.decode(s).e_hat

    def pass_operators(self, result: DecodeResult) -> tuple[PauliOperator, PauliOperator]:
        """Primary and secondary corrections of ``result`` as separate operators."""
        return (
            self._assemble(result.primary.correction, 0),
            self._assemble(0, result.secondary.correction),
        )

    def _assemble(self, primary_mask: int, secondary_mask: int) -> PauliOperator:
        z = x = 0
        for masks, letters in (
            (primary_mask, self.primary_letters),
            (secondary_mask, self.secondary_letters),
        ):
            qb = 0
            m = masks
            while m:
                if m & 1:
                    if letters[qb] == "Z":
                        z ^= 1 << qb
                    else:
                        x ^= 1 << qb
                m >>= 1
                qb += 1
        return PauliOperator(self.code.n, z, x)

    def clear_cache(self) -> None:
        self._primary_cache.clear()
        self._secondary_cache.clear()
        if self._plain is not None:
            self._plain.clear_cache()


_DECODERS: dict[tuple[int, bool], MatchingDecoder] = {}


def decoder_for(code: StabilizerCode, use_weights: bool = True) -> MatchingDecoder:
    key = (id(code), use_weights)
    dec = _DECODERS.get(key)
    if dec is None or dec.code is not code:
        dec = MatchingDecoder(code, use_weights)
        _DECODERS[key] = dec
    return dec


def zzzy_decode(s, code: StabilizerCode, use_weights: bool = True) -> DecodeResult:
    """ZZZY decoder: weight update, primary matching, ZY flip, secondary matching."""
    if code.n_zy == 0:
        raise ValueError(f"{code.family} code has no ZY generators")
    return decoder_for(code, use_weights).decode(s)


def surface_decode(s, code: StabilizerCode) -> DecodeResult:
    return decoder_for(code, False).decode(s)


def xzzx_decode(s, code: StabilizerCode) -> DecodeResult:
    if code.family != "xzzx":
        raise ValueError("xzzx_decode expects an XZZX code")
    return decoder_for(code, False).decode(s)


def decode(s, code: StabilizerCode) -> DecodeResult:
    """Dispatch to the decoder matching ``code.family``."""
    if code.family in ("zzzy", "zzzy-dual"):
        return zzzy_decode(s, code)
    return decoder_for(code, False).decode(s)


def residual_class(e: PauliOperator, r, code: StabilizerCode) -> Outcome:
    """Classify ``e * e_hat`` (``r`` is a DecodeResult or the estimate itself)."""
    e_hat = r.e_hat if isinstance(r, DecodeResult) else r
    residual = compose(e, e_hat)
    if measure(code, residual).any():
        return Outcome.SYNDROME_MISMATCH
    flips_x = not commutes(residual, code.logical_x)
    flips_z = not commutes(residual, code.logical_z)
    return {
        (False, False): Outcome.NO_ERROR,
        (True, False): Outcome.LOGICAL_Z,
        (False, True): Outcome.LOGICAL_X,
        (True, True): Outcome.LOGICAL_Y,
    }[(flips_x, flips_z)]


def decode_error(code: StabilizerCode, e: PauliOperator, **kwargs) -> tuple[DecodeResult, Outcome]:
    """Measure, decode and classify a single error."""
    s = measure(code, e)
    if code.n_zy and kwargs.get("use_weights") is False:
        result = decoder_for(code, False).decode(s)
    else:
        result = decode(s, code)
    return result, residual_class(e, result, code)
