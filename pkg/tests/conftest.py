"""Shared fixture graphs and independent brute-force checkers.

The checkers here deliberately avoid the library's search/DP code paths:
paths come from plain DFS enumeration, subgraph distances from Floyd-Warshall,
and optima from raw power-set sweeps, so they can serve as oracles for both
the solvers and the (smarter) oracle module.
"""
from __future__ import annotations

import itertools
import random

import pytest

from slnet.graphs import INF, Digraph


@pytest.fixture
def g1() -> Digraph:
    # 1->2 (c1,l2), 2->3 (c1,l2), 1->3 (c5,l1)
    return Digraph(3, [(0, 1, 1, 2), (1, 2, 1, 2), (0, 2, 5, 1)])


@pytest.fixture
def diamond() -> Digraph:
    # 1->2 (c1,l5), 2->4 (c1,l5), 1->3 (c10,l1), 3->4 (c10,l1)
    return Digraph(4, [(0, 1, 1, 5), (1, 3, 1, 5), (0, 2, 10, 1), (2, 3, 10, 1)])


@pytest.fixture
def stem() -> Digraph:
    # 1->2 (c9,l1), 2->3 (c1,l1), 2->4 (c1,l1), 1->3 (c6,l1), 1->4 (c6,l1)
    return Digraph(4, [(0, 1, 9, 1), (1, 2, 1, 1), (1, 3, 1, 1), (0, 2, 6, 1), (0, 3, 6, 1)])


@pytest.fixture
def two_cycle() -> Digraph:
    # 1->2 (c3,l1), 2->1 (c4,l1)
    return Digraph(2, [(0, 1, 3, 1), (1, 0, 4, 1)])


def random_graph(rng: random.Random, n: int, m: int, max_cost: int = 50, max_length: int = 10) -> Digraph:
    edges = []
    for _ in range(m):
        tail = rng.randrange(n)
        head = rng.randrange(n)
        edges.append((tail, head, rng.randint(0, max_cost), rng.randint(0, max_length)))
    return Digraph(n, edges)


def enum_simple_paths(g: Digraph, source: int, target: int):
    """All simple paths as edge-id lists, by DFS."""
    out: list[list[int]] = []

    def walk(node, visited, acc):
        if node == target:
            out.append(list(acc))
            # a longer path may revisit target only by leaving it, which
            # breaks simplicity, so stop here
            return
        for eid in g.out_edges[node]:
            e = g.edges[eid]
            if e.head in visited or e.tail == e.head:
                continue
            visited.add(e.head)
            acc.append(eid)
            walk(e.head, visited, acc)
            acc.pop()
            visited.remove(e.head)

    walk(source, {source}, [])
    return out


def brute_min_cost_path(g: Digraph, source: int, target: int, bound) -> int | None:
    """Minimum cost among simple paths of length <= bound, by enumeration."""
    if source == target:
        return 0
    best = None
    for path in enum_simple_paths(g, source, target):
        if sum(g.edges[e].length for e in path) <= bound:
            c = sum(g.edges[e].cost for e in path)
            if best is None or c < best:
                best = c
    return best


def brute_min_weight_path(g: Digraph, weights, source: int, target: int, bound) -> float | None:
    if source == target:
        return 0.0
    best = None
    for path in enum_simple_paths(g, source, target):
        if sum(g.edges[e].length for e in path) <= bound:
            w = sum(weights[e] for e in path)
            if best is None or w < best:
                best = w
    return best


def floyd_distances(g: Digraph, edge_ids=None):
    dist = [[INF] * g.n for _ in range(g.n)]
    for v in range(g.n):
        dist[v][v] = 0
    for eid, e in enumerate(g.edges):
        if edge_ids is not None and eid not in edge_ids:
            continue
        if e.length < dist[e.tail][e.head]:
            dist[e.tail][e.head] = e.length
    for w in range(g.n):
        for u in range(g.n):
            duw = dist[u][w]
            if duw == INF:
                continue
            row_w = dist[w]
            row_u = dist[u]
            for v in range(g.n):
                if duw + row_w[v] < row_u[v]:
                    row_u[v] = duw + row_w[v]
    return dist


def brute_cheapest_subgraph(g: Digraph, bounds) -> tuple[int, frozenset[int]] | None:
    """Power-set minimum-cost subgraph meeting per-pair bounds; None if G fails."""
    ids = list(range(g.m))
    best = None
    for r in range(len(ids) + 1):
        for combo in itertools.combinations(ids, r):
            dist = floyd_distances(g, frozenset(combo))
            if all(
                dist[u][v] <= bounds[u][v]
                for u in range(g.n)
                for v in range(g.n)
            ):
                cost = sum(g.edges[e].cost for e in combo)
                if best is None or cost < best[0]:
                    best = (cost, frozenset(combo))
    return best


def brute_dslst(g: Digraph, root: int, bounds: dict[int, int], k: int) -> int | None:
    """Power-set optimum for covering >= k terminals within exact bounds."""
    ids = [e for e in range(g.m) if g.edges[e].tail != g.edges[e].head]
    best = None
    for r in range(len(ids) + 1):
        for combo in itertools.combinations(ids, r):
            indeg: dict[int, int] = {}
            ok = True
            for eid in combo:
                h = g.edges[eid].head
                indeg[h] = indeg.get(h, 0) + 1
                if indeg[h] > 1 or h == root:
                    ok = False
                    break
            if not ok:
                continue
            # walk from the root; every edge must be used on the tree
            dist = {root: 0}
            frontier = [root]
            used = 0
            adj: dict[int, list[int]] = {}
            for eid in combo:
                adj.setdefault(g.edges[eid].tail, []).append(eid)
            while frontier:
                u = frontier.pop()
                for eid in adj.get(u, ()):
                    used += 1
                    e = g.edges[eid]
                    dist[e.head] = dist[u] + e.length
                    frontier.append(e.head)
            if used != len(combo):
                continue
            covered = sum(1 for t, b in bounds.items() if t in dist and dist[t] <= b)
            if covered >= k:
                cost = sum(g.edges[e].cost for e in combo)
                if best is None or cost < best:
                    best = cost
    return best
