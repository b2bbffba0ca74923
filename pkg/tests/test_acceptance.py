"""Acceptance checks, one test per criterion.

Each test prints a single ``[PASS]``/``[FAIL]`` line with the measured value
before asserting, so the run log doubles as the acceptance report.
"""

import io
import math
import os
import time
from fractions import Fraction
from math import comb

import numpy as np

from conftest import code
from test_matching import (
    brute_mwpm_cost,
    brute_paths,
    hop_counts,
    path_is_valid,
    primary_graph,
    random_problem,
    random_weight_state,
)
from zzzy import cli
from zzzy.analysis import (
    beta,
    class_label,
    classes,
    enumerate_fractions,
    lemma1_count,
    lemma1_patterns,
    logical_census,
    pl_approx,
    weight_enumerator,
)
from zzzy.channel import make_channel, phase_flip
from zzzy.matching import MatchingProblem, matching_cost, mwpm, shortest_paths
from zzzy.montecarlo import BLOCK, TrialConfig, run

GENERATORS = {
    "G1: X1 X2 X4", "G2: X2 X3 X5", "G3: Y1 Z4 Z6", "G4: Z2 Z4 Z5 Y7",
    "G5: Y3 Z5 Z8", "G6: X4 X6 X7 X9", "G7: X5 X7 X8 X10", "G8: Z6 Z9 Y11",
    "G9: Y7 Z9 Z10 Z12", "G10: Z8 Z10 Y13", "G11: X9 X11 X12", "G12: X10 X12 X13",
}
EQ3 = (6, 24, 75, 240, 648, 1440, 2538, 3216, 2634, 1224, 243)

# reference uncorrected fractions, columns in class order
REFERENCE = {
    ("surface", 3): (0.27, 0, 0.27, 0.27, 0.27, 0.51),
    ("xzzx", 3): (0.22, 0.051, 0.27, 0.22, 0.27, 0.51),
    ("zzzy", 3): (0.27, 0.013, 0.37, 0.013, 0.28, 0.59),
    ("surface", 5): (0.021, 0, 0.021, 0, 0, 0.021, 0.021, 0.021, 0.021, 0.042),
    ("xzzx", 5): (0.014, 0.002, 0.016, 0.002, 0.007, 0.021, 0.013, 0.016, 0.021, 0.042),
    ("zzzy", 5): (0.021, 0, 0.021, 0.001, 0.005, 0.021, 5e-4, 0.008, 0.020, 0.047),
}
TOLERANCE = 0.06


def report(capsys, n, ok, text):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {text}", end="")


_TABLES = {}


def table(family, d):
    key = (family, d)
    if key not in _TABLES:
        c = code(family, d)
        start = time.perf_counter()
        _TABLES[key] = (enumerate_fractions(c, c.t + 1), time.perf_counter() - start)
    return _TABLES[key]


def structural(family, d, label):
    if d == 3:
        return (family, label) in (("zzzy", "ZZ"), ("surface", "XZ"))
    pub = dict(zip([class_label(3, i, l) for i, l in classes(3)], REFERENCE[(family, d)]))
    if family in ("surface", "zzzy") and pub[label] == 0:
        return True
    return family == "zzzy" and label == "ZZZ"


def test_01_construction(capsys):
    out, err = io.StringIO(), io.StringIO()
    start = time.perf_counter()
    status = cli.main(["build", "--code", "zzzy", "--distance", "3"], stdout=out, stderr=err)
    elapsed = time.perf_counter() - start
    lines = out.getvalue().splitlines()
    ok = status == 0 and set(lines[1:]) == GENERATORS and len(lines) == 13 and elapsed < 1
    report(capsys, 1, ok, f"build zzzy d=3 gives {len(lines) - 1} generators, set equal = {set(lines[1:]) == GENERATORS}, {elapsed:.3f} s")
    assert ok


def test_02_weight_enumerator(capsys):
    start = time.perf_counter()
    wep = weight_enumerator(code("zzzy", 3))
    elapsed = time.perf_counter() - start
    coeffs = tuple(wep.coefficients[3:14])
    ok = coeffs == EQ3 and wep.total == 12288 and not any(wep.coefficients[:3]) and elapsed < 10
    report(capsys, 2, ok, f"coefficients {coeffs}, sum {wep.total}, {elapsed:.2f} s")
    assert ok


def test_03_logical_census(capsys):
    census = logical_census(code("zzzy", 3))
    ok = census == {3: 6, 4: 24}
    report(capsys, 3, ok, f"weight-3 logicals {census[3]}, weight-4 logicals {census[4]}")
    assert ok


def test_04_correction_completeness(capsys):
    start = time.perf_counter()
    counts = {}
    failures = 0
    for family in ("zzzy", "surface", "xzzx", "zzzy-dual"):
        for d, jmax in ((3, 1), (5, 2)):
            c = code(family, d)
            n_patterns = 0
            for j in range(1, jmax + 1):
                t = enumerate_fractions(c, j)
                n_patterns += sum(st.total for st in t.stats.values())
                failures += sum(st.failures for st in t.stats.values())
            counts[(family, d)] = n_patterns
    elapsed = time.perf_counter() - start
    ok = (
        failures == 0
        and counts[("zzzy", 3)] == 39
        and counts[("zzzy", 5)] == 9 * comb(41, 2) + 3 * 41 == 7503
        and elapsed < 60
    )
    report(capsys, 4, ok, f"{sum(counts.values())} patterns over 4 families (zzzy: 39 at d=3, {counts[('zzzy', 5)]} at d=5), {failures} failures, {elapsed:.1f} s")
    assert ok


def test_05_structural_entries(capsys):
    z3, _ = table("zzzy", 3)
    s3, _ = table("surface", 3)
    z5, tz = table("zzzy", 5)
    s5, ts = table("surface", 5)
    checks = {
        "zzzy3 ZZ = 1/78": z3.stats[(2, 0)].rational == Fraction(1, 78),
        "zzzy3 ZZ failure Z6Z8": [str(e) for e in z3.stats[(2, 0)].failing] == ["Z6 Z8"],
        "surface3 XZ = 0": s3.stats[(1, 1)].failures == 0,
        "zzzy5 ZZZ = 5/10660": (z5.stats[(3, 0)].failures, z5.stats[(3, 0)].total) == (5, 10660),
    }
    for fam, t in (("surface", s5), ("zzzy", z5)):
        for (i, l), pub in zip(classes(3), REFERENCE[(fam, 5)]):
            if pub == 0:
                checks[f"{fam}5 {class_label(3, i, l)} = 0"] = t.stats[(i, l)].failures == 0
    slow = max(tz, ts)
    ok = all(checks.values()) and slow < 600
    bad = [k for k, v in checks.items() if not v]
    report(capsys, 5, ok, f"{len(checks) - len(bad)}/{len(checks)} exact entries hold{'; failing: ' + ', '.join(bad) if bad else ''}; d=5 weight-3 enumeration {tz:.0f} s (zzzy), {ts:.0f} s (surface)")
    assert ok


def test_06_tolerance_entries(capsys):
    lines = []
    worst = 0.0
    worst_at = ""
    for (family, d), pub in REFERENCE.items():
        t, _ = table(family, d)
        j = d // 2 + 1
        cells = []
        for (i, l), ref in zip(classes(j), pub):
            label = class_label(j, i, l)
            value = t.f(i, l)
            if structural(family, d, label):
                cells.append(f"{label} {value:.3g} (exact)")
                continue
            dev = abs(value - ref)
            if dev > worst:
                worst, worst_at = dev, f"{family} d={d} {label}"
            cells.append(f"{label} {value:.3g} vs {ref:g} ({dev:+.3f})")
        lines.append(f"    {family} d={d}: " + ", ".join(cells))
    ok = worst <= TOLERANCE
    report(capsys, 6, ok, f"max |deviation| {worst:.4f} at {worst_at} (tolerance {TOLERANCE})")
    with capsys.disabled():
        print("\n" + "\n".join(lines), end="")
    assert ok


def test_07_beta2_phase_flip(capsys):
    t, _ = table("zzzy", 3)
    b = beta(t, phase_flip(0.001))
    ok = f"{b:.3g}" == "0.987" and abs(b - (1 - 1 / 78)) < 1e-12
    report(capsys, 7, ok, f"beta_2 = {b:.5f} (1 - 1/78 = {1 - 1 / 78:.5f})")
    assert ok


def test_08_lemma1(capsys):
    c = code("zzzy", 5)
    t, _ = table("zzzy", 5)
    st = t.stats[(3, 0)]
    found = set(st.failing)
    expected = lemma1_patterns(c)
    ok = st.failures == lemma1_count(5) == 5 * comb(3, 3) and found == expected
    report(capsys, 8, ok, f"{st.failures} failing ZZZ patterns, closed-form count {lemma1_count(5)}, set equal = {found == expected}: {sorted(str(e) for e in found)}")
    assert ok


def test_09_analytic_ordering(capsys):
    grid_a = (1, 2, 5, 10, 20, 50, 100, 200, 500, 1000)
    summary = []
    ok = True
    for d in (3, 5):
        tz, _ = table("zzzy", d)
        tsu, _ = table("surface", d)
        ratios = []
        for A in grid_a:
            ch = make_channel(0.001, A)
            ratios.append(pl_approx(code("surface", d), ch, tsu) / pl_approx(code("zzzy", d), ch, tz))
        better = all(r > 1 for r in ratios[1:])
        growing = all(b > a for a, b in zip(ratios, ratios[1:]))
        near = abs(ratios[0] - 1) < 0.2
        ok &= better and growing and near
        summary.append(f"d={d}: surface/zzzy {ratios[0]:.3f} at A=1 to {ratios[-1]:.1f} at A=1000")
    report(capsys, 9, ok, "; ".join(summary))
    assert ok


def test_10_monte_carlo(capsys):
    c = code("zzzy", 3)
    t, _ = table("zzzy", 3)
    predicted = pl_approx(c, phase_flip(0.001), t)
    workers = min(8, os.cpu_count() or 1)
    res = run(TrialConfig("zzzy", 3, 0.001, math.inf, 10**8, seed=2024), workers=workers)
    sigma = math.sqrt(predicted * (1 - predicted) / res.trials)
    z = (res.pl - predicted) / sigma
    ok = abs(z) <= 3 and res.mismatch == 0
    report(capsys, 10, ok, f"{res.failures}/{res.trials} -> p_L {res.pl:.3e} vs {predicted:.3e} ({z:+.2f} sigma), {res.wall_time:.1f} s on {workers} worker(s)")
    assert ok


def test_11_oracles(capsys):
    rng = np.random.default_rng(2024)
    match_ok = 0
    for trial in range(200):
        k = int(rng.integers(1, 6))
        pair, boundary = random_problem(rng, k, negative=trial % 3 == 0)
        prob = MatchingProblem.from_distances(pair, boundary)
        match_ok += abs(matching_cost(prob, mwpm(prob)) - brute_mwpm_cost(prob.cost)) < 1e-9
    path_ok = 0
    for state in range(200):
        d = 3 if state < 100 else 5
        c = code("zzzy", d)
        graph = primary_graph(c)
        q = random_weight_state(c, rng)
        m = int((q < 0).sum())
        source = int(rng.integers(graph.boundary))
        hops = hop_counts(graph, source)
        upper = max(h for h in hops if h < math.inf) * q.max()
        tree = shortest_paths(graph, source, q)
        want = brute_paths(graph, source, q, int(m + (upper + 0.1 * m) / 0.9) + 1)
        path_ok += all(
            abs(tree.dist[v] - want[v]) < 1e-9 and path_is_valid(graph, source, v, tree.path[v])
            for v in range(graph.num_nodes)
        )
    ok = match_ok == 200 and path_ok == 200
    report(capsys, 11, ok, f"mwpm = brute force on {match_ok}/200 instances; shortest paths = simple-path search on {path_ok}/200 states")
    assert ok


def test_12_determinism(capsys, tmp_path):
    argv = ["simulate", "--code", "zzzy,xzzx", "--distance", "3", "--p", "0.004,0.02",
            "--asymmetry", "1,100,inf", "--trials", str(2 * BLOCK + 1234), "--seed", "99"]
    bodies = {}
    for w in (1, 2, 4):
        path = tmp_path / f"w{w}.csv"
        status = cli.main(argv + ["--workers", str(w), "--out", str(path)], stdout=io.StringIO(), stderr=io.StringIO())
        assert status == 0
        bodies[w] = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
    ok = bodies[1] == bodies[2] == bodies[4] and len(bodies[1]) == 13
    report(capsys, 12, ok, f"CSV bodies for --workers 1, 2, 4 identical = {ok} ({len(bodies[1]) - 1} rows, {2 * BLOCK + 1234} trials each)")
    assert ok
