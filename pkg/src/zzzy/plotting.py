"""Static SVG line charts of logical error rate against asymmetry or p."""

from __future__ import annotations

import math
from collections import defaultdict
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

AXES = {"A": "Asymmetry A", "p": "Physical error rate p"}


def _series(rows: Sequence[dict], x: str) -> dict[tuple[str, int], list[dict]]:
    out = defaultdict(list)
    for row in rows:
        out[(row["family"], row["d"])].append(row)
    for key in out:
        out[key].sort(key=lambda r: r[x])
    return dict(out)


def plot_rows(rows: Sequence[dict], x: str, path: str, title: str = "", metadata: str = "") -> int:
    """Draw one line per ``(family, d)`` and save an SVG to ``path``.

    Rows with infinite ``x`` or zero ``pl`` cannot sit on log axes and are
    skipped.  Returns the number of points drawn.
    """
    if x not in AXES:
        raise ValueError(f"x axis must be one of {sorted(AXES)}, got {x!r}")
    if not rows:
        raise ValueError("no rows to plot")
    fig, ax = plt.subplots(figsize=(6, 4.5))
    drawn = 0
    for (family, d), pts in sorted(_series(rows, x).items()):
        pts = [r for r in pts if math.isfinite(r[x]) and r[x] > 0 and r["pl"] > 0]
        if not pts:
            continue
        xs = [r[x] for r in pts]
        ys = [r["pl"] for r in pts]
        lo = [r["pl"] - r["ci_lo"] for r in pts]
        hi = [r["ci_hi"] - r["pl"] for r in pts]
        ax.errorbar(xs, ys, yerr=[lo, hi], marker="o", ms=3, capsize=2, label=f"{family} d={d}")
        drawn += len(pts)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(AXES[x])
    ax.set_ylabel("Logical error rate")
    if title:
        ax.set_title(title)
    if drawn:
        ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Description": metadata} if metadata else None)
    plt.close(fig)
    return drawn
