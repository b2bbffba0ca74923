"""Check graphs, shortest paths and exact minimum-weight perfect matching.

A :class:`CheckGraph` has one node per check (generator row) of a decoding
pass plus a single boundary node; every data qubit is an edge joining the one
or two checks that an error on it flips.  The boundary is a sink: paths may
end there but never pass through it.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

import networkx as nx
import numpy as np

EPS = 1e-9
# largest defect count solved by the exact subset DP; blossom beyond
DP_LIMIT = 12


class CheckGraph:
    """Decoding graph of one pass.

    Parameters
    ----------
    rows : sequence of int
        Generator rows acting as nodes ``0 .. len(rows) - 1``.
    edges : sequence of tuple
        ``edges[q]`` is the pair of node indices flipped by an error on qubit
        ``q``; a single-check edge uses :attr:`boundary` as second endpoint.
    """

    def __init__(self, rows: Sequence[int], edges: Sequence[tuple[int, int]]):
        self.rows = tuple(rows)
        self.node_of_row = {r: i for i, r in enumerate(self.rows)}
        self.boundary = len(self.rows)
        self.edges = tuple(edges)
        self.adj: list[list[tuple[int, int]]] = [[] for _ in range(self.boundary + 1)]
        for q, (u, v) in enumerate(self.edges):
            self.adj[u].append((v, q))
            self.adj[v].append((u, q))
        for nbrs in self.adj:
            nbrs.sort()

    @property
    def num_nodes(self) -> int:
        return self.boundary + 1

    def to_networkx(self, weights) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(range(self.num_nodes))
        for q, (u, v) in enumerate(self.edges):
            g.add_edge(u, v, key=q, weight=float(weights[q]))
        return g


@dataclass
class PathTree:
    """Single-source shortest paths: ``dist[v]`` and qubit bitmask ``path[v]``."""

    source: int
    dist: list[float]
    path: list[Optional[int]]


def shortest_paths(graph: CheckGraph, source: int, weights) -> PathTree:
    """Exact shortest simple paths from ``source`` under per-qubit ``weights``.

    Non-negative weights use Dijkstra.  With negative edges a label-correcting
    search is run over (node, last negative edge) states, forbidding an
    immediate reversal along a negative edge; on the planar check graphs no
    other closed walk has negative cost, so the result equals the shortest
    simple path.  If a negative cycle is detected anyway, an exhaustive
    branch-and-bound over simple paths takes over.
    """
    w = [float(x) for x in weights]
    if min(w[q] for q in range(len(graph.edges))) >= 0:
        return _dijkstra(graph, source, w)
    try:
        return _label_correcting(graph, source, w)
    except _NegativeCycle:
        return _branch_and_bound(graph, source, w)


def _dijkstra(graph: CheckGraph, source: int, w: list[float]) -> PathTree:
    n = graph.num_nodes
    dist = [np.inf] * n
    path: list[Optional[int]] = [None] * n
    dist[source] = 0.0
    path[source] = 0
    done = [False] * n
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        if u == graph.boundary and u != source:
            continue
        for v, q in graph.adj[u]:
            nd = d + w[q]
            if nd < dist[v] - EPS:
                dist[v] = nd
                path[v] = path[u] ^ (1 << q)
                heapq.heappush(heap, (nd, v))
    return PathTree(source, dist, path)


class _NegativeCycle(Exception):
    pass


def _label_correcting(graph: CheckGraph, source: int, w: list[float]) -> PathTree:
    neg = {q for q in range(len(graph.edges)) if w[q] < 0}
    # state = (node, qubit of the negative edge just used or -1)
    dist: dict[tuple[int, int], float] = {(source, -1): 0.0}
    path: dict[tuple[int, int], int] = {(source, -1): 0}
    queue = deque([(source, -1)])
    queued = {(source, -1)}
    relax = 0
    limit = 4 * graph.num_nodes * (len(neg) + 1) * (len(graph.edges) + 1)
    while queue:
        state = queue.popleft()
        queued.discard(state)
        u, last = state
        if u == graph.boundary and u != source:
            continue
        d = dist[state]
        for v, q in graph.adj[u]:
            if q == last:
                continue
            nstate = (v, q if q in neg else -1)
            nd = d + w[q]
            if nd < dist.get(nstate, np.inf) - EPS:
                relax += 1
                if relax > limit:
                    raise _NegativeCycle
                dist[nstate] = nd
                path[nstate] = path[state] ^ (1 << q)
                if nstate not in queued:
                    queue.append(nstate)
                    queued.add(nstate)
    best = [np.inf] * graph.num_nodes
    best_path: list[Optional[int]] = [None] * graph.num_nodes
    for (v, last), d in sorted(dist.items()):
        if d < best[v] - EPS:
            best[v] = d
            best_path[v] = path[(v, last)]
    for v, mask in enumerate(best_path):
        if mask is not None and v != source and not _is_simple(graph, source, v, mask):
            raise _NegativeCycle
    return PathTree(source, best, best_path)


def _is_simple(graph: CheckGraph, source: int, target: int, mask: int) -> bool:
    """A qubit set is a simple source-target path iff degrees are 1,1,2,...,2."""
    degree = [0] * graph.num_nodes
    q = 0
    count = 0
    while mask:
        if mask & 1:
            u, v = graph.edges[q]
            degree[u] += 1
            degree[v] += 1
            count += 1
        mask >>= 1
        q += 1
    for node, deg in enumerate(degree):
        want = 1 if node in (source, target) else (0, 2)
        if isinstance(want, int):
            if deg != want:
                return False
        elif deg not in want:
            return False
    touched = sum(1 for deg in degree if deg)
    return touched == count + 1


def _branch_and_bound(graph: CheckGraph, source: int, w: list[float]) -> PathTree:
    positive = [max(x, 0.0) for x in w]
    neg_total = sum(x for x in w if x < 0)
    n = graph.num_nodes
    dist = [np.inf] * n
    path: list[Optional[int]] = [None] * n
    dist[source] = 0.0
    path[source] = 0
    for target in range(n):
        if target == source:
            continue
        lb = _dijkstra_to(graph, target, positive)
        best = [np.inf, None]

        def dfs(u, cost, visited, mask):
            if u == target:
                if cost < best[0] - EPS:
                    best[0], best[1] = cost, mask
                return
            if u == graph.boundary:
                return
            for v, q in graph.adj[u]:
                if visited >> v & 1:
                    continue
                nc = cost + w[q]
                if nc + lb[v] + neg_total >= best[0] - EPS:
                    continue
                dfs(v, nc, visited | (1 << v), mask | (1 << q))

        dfs(source, 0.0, 1 << source, 0)
        dist[target], path[target] = best
    return PathTree(source, dist, path)


def _dijkstra_to(graph: CheckGraph, target: int, w: list[float]) -> list[float]:
    """Distances to ``target`` (boundary only usable as the target itself)."""
    n = graph.num_nodes
    dist = [np.inf] * n
    dist[target] = 0.0
    heap = [(0.0, target)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        if u == graph.boundary and u != target:
            continue
        for v, q in graph.adj[u]:
            nd = d + w[q]
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


# -- matching ----------------------------------------------------------------


@dataclass
class MatchingProblem:
    """Highlighted checks plus one boundary copy each.

    Nodes ``0 .. k-1`` are the highlighted checks, ``k .. 2k-1`` their
    boundary copies.  ``cost[i, j]`` for two checks is their path cost,
    ``cost[i, k + i]`` the check-to-boundary cost, boundary copies join at
    zero cost and every other entry is infinite.
    """

    cost: np.ndarray

    @classmethod
    def from_distances(cls, pair_cost, boundary_cost) -> "MatchingProblem":
        pair_cost = np.asarray(pair_cost, dtype=float)
        boundary_cost = np.asarray(boundary_cost, dtype=float)
        k = len(boundary_cost)
        cost = np.full((2 * k, 2 * k), np.inf)
        cost[:k, :k] = pair_cost
        cost[k:, k:] = 0.0
        for i in range(k):
            cost[i, k + i] = cost[k + i, i] = boundary_cost[i]
            cost[i, i] = cost[k + i, k + i] = np.inf
        return cls(cost)

    @property
    def k(self) -> int:
        return len(self.cost) // 2


def matching_cost(problem: MatchingProblem, pairs) -> float:
    return float(sum(problem.cost[a, b] for a, b in pairs))


def mwpm(problem: MatchingProblem) -> list[tuple[int, int]]:
    """Exact minimum-weight perfect matching of ``problem``.

    Returns sorted node pairs ``(a, b)`` with ``a < b``.  Up to
    :data:`DP_LIMIT` checks the subset DP returns the lexicographically
    smallest optimal pairing (each check, in index order, takes the lowest
    partner it can; its boundary copy ranks after every check).  Larger
    instances go to the blossom algorithm.
    """
    size = len(problem.cost)
    if size % 2:
        raise ValueError(f"perfect matching needs an even node count, got {size}")
    k = problem.k
    if k == 0:
        return []
    if k <= DP_LIMIT:
        partner = _dp_match(problem.cost[:k, :k], np.diag(problem.cost[:k, k:]))
    else:
        partner = _blossom_match(problem.cost[:k, :k], np.diag(problem.cost[:k, k:]))
    return _expand(partner, k)


def _expand(partner: list[Optional[int]], k: int) -> list[tuple[int, int]]:
    pairs = []
    boundary_free = []
    for i, j in enumerate(partner):
        if j is None:
            pairs.append((i, k + i))
        elif i < j:
            pairs.append((i, j))
            boundary_free.append(k + i)
            boundary_free.append(k + j)
    boundary_free.sort()
    pairs.extend(zip(boundary_free[::2], boundary_free[1::2]))
    return sorted(pairs)


def solve_pairing(pair_cost, boundary_cost) -> list[Optional[int]]:
    """Reduced form: ``partner[i]`` is the matched check or ``None`` for boundary."""
    pair_cost = np.asarray(pair_cost, dtype=float)
    boundary_cost = np.asarray(boundary_cost, dtype=float)
    k = len(boundary_cost)
    if k == 0:
        return []
    if k <= DP_LIMIT:
        return _dp_match(pair_cost, boundary_cost)
    return _blossom_match(pair_cost, boundary_cost)


def _dp_match(pair_cost: np.ndarray, boundary_cost: np.ndarray) -> list[Optional[int]]:
    k = len(boundary_cost)
    pc = pair_cost.tolist()
    bc = boundary_cost.tolist()
    memo = {0: 0.0}

    def best(mask: int) -> float:
        if mask in memo:
            return memo[mask]
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        value = bc[i] + best(rest)
        m = rest
        while m:
            j = (m & -m).bit_length() - 1
            m &= m - 1
            value = min(value, pc[i][j] + best(rest & ~(1 << j)))
        memo[mask] = value
        return value

    full = (1 << k) - 1
    best(full)
    partner: list[Optional[int]] = [None] * k
    mask = full
    while mask:
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        target = memo[mask]
        chosen = None
        m = rest
        while m:
            j = (m & -m).bit_length() - 1
            m &= m - 1
            if pc[i][j] + best(rest & ~(1 << j)) <= target + EPS:
                chosen = j
                break
        if chosen is None:
            mask = rest
        else:
            partner[i], partner[chosen] = chosen, i
            mask = rest & ~(1 << chosen)
    return partner


def _blossom_match(pair_cost: np.ndarray, boundary_cost: np.ndarray) -> list[Optional[int]]:
    k = len(boundary_cost)
    finite = np.concatenate([pair_cost[np.isfinite(pair_cost)], boundary_cost])
    big = float(np.abs(finite).sum()) + 1.0
    g = nx.Graph()
    for i in range(k):
        g.add_edge(i, k + i, weight=big - boundary_cost[i])
        for j in range(i + 1, k):
            if np.isfinite(pair_cost[i, j]):
                g.add_edge(i, j, weight=big - pair_cost[i, j])
            g.add_edge(k + i, k + j, weight=big)
    matching = nx.max_weight_matching(g, maxcardinality=True)
    partner: list[Optional[int]] = [None] * k
    for a, b in matching:
        if a < k and b < k:
            partner[a], partner[b] = b, a
    return partner
