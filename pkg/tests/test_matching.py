import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import code
from zzzy.decoder import MatchingDecoder, update_weights
from zzzy.matching import (
    DP_LIMIT,
    CheckGraph,
    MatchingProblem,
    _blossom_match,
    _dp_match,
    matching_cost,
    mwpm,
    shortest_paths,
    solve_pairing,
)


# -- oracles ----------------------------------------------------------------------


def perfect_matchings(nodes):
    if not nodes:
        yield []
        return
    a = nodes[0]
    for i in range(1, len(nodes)):
        rest = nodes[1:i] + nodes[i + 1 :]
        for m in perfect_matchings(rest):
            yield [(a, nodes[i])] + m


def brute_mwpm_cost(cost):
    return min(sum(cost[a, b] for a, b in m) for m in perfect_matchings(list(range(len(cost)))))


def brute_paths(graph, source, w, max_len):
    """Cheapest simple path from ``source`` to every node, boundary as a sink."""
    best = [math.inf] * graph.num_nodes
    best[source] = 0.0
    visited = {source}

    def dfs(u, cost, depth):
        if depth == max_len:
            return
        for v, q in graph.adj[u]:
            if v in visited:
                continue
            c = cost + w[q]
            if c < best[v]:
                best[v] = c
            if v != graph.boundary:
                visited.add(v)
                dfs(v, c, depth + 1)
                visited.discard(v)

    dfs(source, 0.0, 0)
    return best


def hop_counts(graph, source):
    dist = [math.inf] * graph.num_nodes
    dist[source] = 0
    frontier = [source]
    while frontier:
        nxt = []
        for u in frontier:
            if u == graph.boundary and u != source:
                continue
            for v, _ in graph.adj[u]:
                if dist[v] == math.inf:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return dist


def path_is_valid(graph, source, target, mask):
    """``mask`` must be the edge set of a simple source-target path."""
    deg = [0] * graph.num_nodes
    q = 0
    m = mask
    edges = []
    while m:
        if m & 1:
            u, v = graph.edges[q]
            deg[u] += 1
            deg[v] += 1
            edges.append((u, v))
        m >>= 1
        q += 1
    if source == target:
        return mask == 0
    ends = [v for v in range(graph.num_nodes) if deg[v] % 2]
    if sorted(ends) != sorted([source, target]) or max(deg) > 2:
        return False
    if target != graph.boundary and deg[graph.boundary]:
        return False
    # connected: walk from source
    seen, stack = {source}, [source]
    while stack:
        u = stack.pop()
        for a, b in edges:
            for x, y in ((a, b), (b, a)):
                if x == u and y not in seen:
                    seen.add(y)
                    stack.append(y)
    return target in seen and len(seen) == len(edges) + 1


def random_problem(rng, k, negative=False):
    lo = -1.0 if negative else 0.0
    pair = rng.uniform(lo, 5, (k, k))
    pair = np.round((pair + pair.T) / 2, 1)
    np.fill_diagonal(pair, np.inf)
    boundary = np.round(rng.uniform(lo, 5, k), 1)
    return pair, boundary


# -- matching ---------------------------------------------------------------------


class TestMWPM:
    def test_brute_force_oracle(self):
        rng = np.random.default_rng(11)
        for trial in range(200):
            k = int(rng.integers(1, 6))  # 2k <= 10 nodes
            pair, boundary = random_problem(rng, k, negative=trial % 3 == 0)
            prob = MatchingProblem.from_distances(pair, boundary)
            pairs = mwpm(prob)
            covered = sorted(x for p in pairs for x in p)
            assert covered == list(range(2 * k))
            assert matching_cost(prob, pairs) == pytest.approx(brute_mwpm_cost(prob.cost), abs=1e-9)

    def test_blossom_agrees_with_dp(self):
        rng = np.random.default_rng(12)
        for _ in range(60):
            k = int(rng.integers(1, DP_LIMIT + 1))
            pair, boundary = random_problem(rng, k)
            a, b = _dp_match(pair, boundary), _blossom_match(pair, boundary)

            def cost(partner):
                return sum(boundary[i] if j is None else pair[i, j] / 2 for i, j in enumerate(partner))

            assert cost(a) == pytest.approx(cost(b), abs=1e-9)

    def test_large_instance_uses_blossom(self):
        rng = np.random.default_rng(13)
        pair, boundary = random_problem(rng, DP_LIMIT + 4)
        partner = solve_pairing(pair, boundary)
        for i, j in enumerate(partner):
            assert j is None or partner[j] == i

    def test_empty(self):
        assert mwpm(MatchingProblem.from_distances(np.zeros((0, 0)), np.zeros(0))) == []

    def test_odd_rejected(self):
        with pytest.raises(ValueError):
            mwpm(MatchingProblem(np.zeros((3, 3))))

    def test_tie_break_prefers_lowest_partner(self):
        # pairing {0,1} and sending both to the boundary both cost 1.0
        pair = np.array([[np.inf, 1.0], [1.0, np.inf]])
        assert solve_pairing(pair, np.array([0.5, 0.5])) == [1, 0]

    def test_tie_break_boundary_last(self):
        pair = np.array([[np.inf, 2.0, 1.0], [2.0, np.inf, 1.0], [1.0, 1.0, np.inf]])
        # 0-2 with 1 to boundary (1 + 1) ties 0-1 with 2 to boundary (2 + 0) ...
        partner = solve_pairing(pair, np.array([1.0, 1.0, 0.0]))
        assert partner == [1, 0, None]

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 5), st.integers(0, 2**32 - 1))
    def test_optimal_property(self, k, seed):
        pair, boundary = random_problem(np.random.default_rng(seed), k, negative=True)
        prob = MatchingProblem.from_distances(pair, boundary)
        assert matching_cost(prob, mwpm(prob)) == pytest.approx(brute_mwpm_cost(prob.cost), abs=1e-9)


# -- shortest paths ------------------------------------------------------------------


def primary_graph(c):
    return MatchingDecoder(c).primary_graph


def random_weight_state(c, rng):
    if rng.random() < 0.5:
        s = (rng.random(c.r) < 0.3).astype(np.uint8)
        return update_weights(s, np.ones(c.n), c)
    q = np.ones(c.n)
    ys = c.y_qubits
    for qb in ys:
        q[qb] = rng.choice([0.9, 1.0, 1.1])
    for qb in rng.choice(ys, size=min(len(ys), int(rng.integers(1, 4))), replace=False):
        q[qb] = -0.1
    return q


class TestShortestPaths:
    @pytest.mark.parametrize("d", [3, 5])
    def test_brute_force_oracle(self, d):
        c = code("zzzy", d)
        graph = primary_graph(c)
        rng = np.random.default_rng(20 + d)
        for _ in range(100):
            q = random_weight_state(c, rng)
            m = int((q < 0).sum())
            for source in rng.choice(graph.boundary, size=2 if d == 5 else graph.boundary, replace=False):
                source = int(source)
                hops = hop_counts(graph, source)
                upper = max(h for h in hops if h < math.inf) * q.max()
                # cost >= 0.9 (L - m) - 0.1 m bounds the useful path length
                max_len = int(m + (upper + 0.1 * m) / 0.9) + 1
                tree = shortest_paths(graph, source, q)
                want = brute_paths(graph, source, q, max_len)
                for v in range(graph.num_nodes):
                    assert tree.dist[v] == pytest.approx(want[v], abs=1e-9), (v, q.tolist())
                    assert path_is_valid(graph, source, v, tree.path[v])
                    used = sum(q[i] for i in range(c.n) if tree.path[v] >> i & 1)
                    assert used == pytest.approx(tree.dist[v], abs=1e-9)

    def test_uniform_weights_are_hop_counts(self):
        for family in ("surface", "zzzy", "xzzx"):
            for d in (3, 5):
                c = code(family, d)
                g = primary_graph(c)
                for source in range(g.num_nodes):
                    tree = shortest_paths(g, source, np.ones(c.n))
                    assert tree.dist == hop_counts(g, source)

    def test_forced_qubit_path(self, zzzy3):
        # Z2 Z3 error: from G1 the boundary costs 1.0 + (-0.1) via qubits 2, 3 and 1.1 via qubit 1
        s = np.zeros(12, dtype=np.uint8)
        for label in (1, 5):
            s[zzzy3.row_of_label(label)] = 1
        q = update_weights(s, np.ones(13), zzzy3)
        g = primary_graph(zzzy3)
        tree = shortest_paths(g, g.node_of_row[zzzy3.row_of_label(1)], q)
        assert tree.dist[g.boundary] == pytest.approx(0.9)
        assert tree.path[g.boundary] == 0b110

    def test_boundary_is_a_sink(self):
        # two boundary-adjacent checks far apart must not be joined through the boundary
        c = code("surface", 5)
        g = primary_graph(c)
        tree = shortest_paths(g, 0, np.ones(c.n))
        assert tree.dist[g.boundary - 1] == hop_counts(g, 0)[g.boundary - 1] > 2

    def test_networkx_agrees_without_negative_edges(self):
        import networkx as nx

        c = code("zzzy", 5)
        g = primary_graph(c)
        rng = np.random.default_rng(7)
        q = rng.uniform(0.5, 1.5, c.n)
        nxg = g.to_networkx(q)
        nxg.remove_node(g.boundary)
        ref = nx.single_source_dijkstra_path_length(nxg, 0)
        tree = shortest_paths(g, 0, q)
        for v, dist in ref.items():
            assert tree.dist[v] == pytest.approx(dist)


def test_check_graph_edges():
    g = CheckGraph([10, 11], [(0, 2), (0, 1), (1, 2)])
    assert g.boundary == 2 and g.num_nodes == 3
    assert g.adj[0] == [(1, 1), (2, 0)]
