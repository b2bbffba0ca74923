"""Seeded Monte Carlo estimation of logical error rates.

Trials are cut into fixed blocks of :data:`BLOCK` trials.  Block ``b`` draws
from a Philox generator keyed by the seed with ``b`` in the top counter word,
so every block's stream is a pure function of ``(seed, b)`` and the totals do
not depend on how blocks are spread over worker processes.
"""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .analysis import outcome_codes
from .channel import ChannelModel, make_channel, sample_errors
from .codes import FAMILIES, build_code
from .decoder import MatchingDecoder
from .pauli import symplectic_syndromes

BLOCK = 1 << 18
CSV_FIELDS = ("family", "d", "p", "A", "trials", "fail_x", "fail_y", "fail_z", "pl", "ci_lo", "ci_hi", "seed")


@dataclass(frozen=True)
class TrialConfig:
    family: str
    d: int
    p: float
    A: float
    trials: int
    seed: int = 0
    use_weights: bool = True

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown code family {self.family!r}")
        if self.d < 3 or self.d % 2 == 0:
            raise ValueError(f"distance must be odd and >= 3, got {self.d}")
        make_channel(self.p, self.A)  # range checks
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass
class SimResult:
    config: TrialConfig
    trials: int
    fail_x: int
    fail_y: int
    fail_z: int
    mismatch: int
    wall_time: float = field(default=0.0, compare=False)

    @property
    def failures(self) -> int:
        return self.fail_x + self.fail_y + self.fail_z + self.mismatch

    @property
    def pl(self) -> float:
        return self.failures / self.trials

    @property
    def ci(self) -> tuple[float, float]:
        return wilson_interval(self.failures, self.trials)

    @property
    def sigma(self) -> float:
        """Binomial standard error of :attr:`pl`."""
        return math.sqrt(self.pl * (1 - self.pl) / self.trials)

    def row(self) -> dict:
        lo, hi = self.ci
        c = self.config
        return {
            "family": c.family,
            "d": c.d,
            "p": repr(float(c.p)),
            "A": "inf" if math.isinf(c.A) else repr(float(c.A)),
            "trials": self.trials,
            "fail_x": self.fail_x,
            "fail_y": self.fail_y,
            "fail_z": self.fail_z,
            "pl": repr(self.pl),
            "ci_lo": repr(lo),
            "ci_hi": repr(hi),
            "seed": c.seed,
        }


def wilson_interval(k: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson score interval for ``k`` successes in ``n`` trials."""
    if n == 0:
        return (0.0, 1.0)
    phat = k / n
    denom = 1 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    lo = 0.0 if k == 0 else max(0.0, centre - half)
    hi = 1.0 if k == n else min(1.0, centre + half)
    return (lo, hi)


def block_rng(seed: int, block: int) -> np.random.Generator:
    """Counter-based stream for one block of trials."""
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, block]))


class _Worker:
    """Per-process state: the code and a warm decoder cache."""

    def __init__(self, family: str, d: int, use_weights: bool):
        self.code = build_code(family, d)
        self.decoder = MatchingDecoder(self.code, use_weights)
        self.estimates: dict[bytes, tuple[np.ndarray, np.ndarray]] = {}
        self.H = self.code.H

    def estimate(self, packed: bytes, r: int):
        hit = self.estimates.get(packed)
        if hit is None:
            s = np.unpackbits(np.frombuffer(packed, dtype=np.uint8))[:r]
            e_hat = self.decoder.decode(s).e_hat
            hit = (e_hat.z_part, e_hat.x_part)
            if len(self.estimates) > 2_000_000:
                self.estimates.clear()
                self.decoder.clear_cache()
            self.estimates[packed] = hit
        return hit

    def run_block(self, ch: ChannelModel, seed: int, block: int, size: int) -> np.ndarray:
        code = self.code
        rng = block_rng(seed, block)
        t_idx, q_idx, pauli = sample_errors(ch, code.n, size, rng)
        counts = np.zeros(5, dtype=np.int64)
        if len(t_idx) == 0:
            return counts
        trials, row = np.unique(t_idx, return_inverse=True)
        m = len(trials)
        z = np.zeros((m, code.n), dtype=np.uint8)
        x = np.zeros((m, code.n), dtype=np.uint8)
        z[row, q_idx] = (pauli >> 1) & 1
        x[row, q_idx] = pauli & 1
        syn = symplectic_syndromes(self.H, z, x)
        packed = np.packbits(syn, axis=1)
        uniq, inverse = np.unique(packed, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
        ez = np.empty((len(uniq), code.n), dtype=np.uint8)
        ex = np.empty((len(uniq), code.n), dtype=np.uint8)
        for u, prow in enumerate(uniq):
            ez[u], ex[u] = self.estimate(prow.tobytes(), code.r)
        out = outcome_codes(code, z ^ ez[inverse], x ^ ex[inverse])
        counts += np.bincount(out, minlength=5)
        return counts


_WORKER: Optional[_Worker] = None


def _init_worker(family: str, d: int, use_weights: bool) -> None:
    global _WORKER
    _WORKER = _Worker(family, d, use_weights)


def _run_blocks(args) -> np.ndarray:
    ch, seed, blocks = args
    total = np.zeros(5, dtype=np.int64)
    for block, size in blocks:
        total += _WORKER.run_block(ch, seed, block, size)
    return total


def _blocks(trials: int) -> list[tuple[int, int]]:
    full, rest = divmod(trials, BLOCK)
    out = [(b, BLOCK) for b in range(full)]
    if rest:
        out.append((full, rest))
    return out


def run(cfg: TrialConfig, workers: int = 1) -> SimResult:
    """Estimate the logical error rate for one configuration."""
    start = time.perf_counter()
    ch = make_channel(cfg.p, cfg.A)
    blocks = _blocks(cfg.trials)
    if workers <= 1 or len(blocks) == 1:
        worker = _Worker(cfg.family, cfg.d, cfg.use_weights)
        counts = np.zeros(5, dtype=np.int64)
        for block, size in blocks:
            counts += worker.run_block(ch, cfg.seed, block, size)
    else:
        shards = [blocks[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_init_worker,
            initargs=(cfg.family, cfg.d, cfg.use_weights),
        ) as pool:
            parts = pool.map(_run_blocks, [(ch, cfg.seed, s) for s in shards if s])
            counts = np.sum(list(parts), axis=0)
    elapsed = time.perf_counter() - start
    # outcome codes: 1 = logical Z, 2 = logical X, 3 = logical Y, 4 = mismatch
    return SimResult(
        config=cfg,
        trials=cfg.trials,
        fail_x=int(counts[2]),
        fail_y=int(counts[3]),
        fail_z=int(counts[1]),
        mismatch=int(counts[4]),
        wall_time=elapsed,
    )


def sweep(grid: Iterable[TrialConfig], workers: int = 1) -> list[SimResult]:
    return [run(cfg, workers=workers) for cfg in grid]


def grid(
    families: Sequence[str],
    distances: Sequence[int],
    ps: Sequence[float],
    asymmetries: Sequence[float],
    trials: int,
    seed: int = 0,
) -> list[TrialConfig]:
    """Cartesian product of configurations, all sharing ``trials`` and ``seed``."""
    return [
        TrialConfig(f, d, p, A, trials, seed)
        for f in families
        for d in distances
        for p in ps
        for A in asymmetries
    ]


def to_csv(results: Sequence[SimResult], header_lines: Sequence[str] = ()) -> str:
    """CSV text; ``header_lines`` become leading ``#`` comments."""
    buf = io.StringIO()
    for line in header_lines:
        buf.write(f"# {line}\n")
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in results:
        writer.writerow(r.row())
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    """Parse CSV written by :func:`to_csv`, skipping comment lines."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    rows = []
    for row in csv.DictReader(lines):
        rows.append(
            {
                "family": row["family"],
                "d": int(row["d"]),
                "p": float(row["p"]),
                "A": float(row["A"]),
                "trials": int(row["trials"]),
                "fail_x": int(row["fail_x"]),
                "fail_y": int(row["fail_y"]),
                "fail_z": int(row["fail_z"]),
                "pl": float(row["pl"]),
                "ci_lo": float(row["ci_lo"]),
                "ci_hi": float(row["ci_hi"]),
                "seed": int(row["seed"]),
            }
        )
    return rows
