"""Directed multigraph data model and shortest-path primitives.

Nodes are 0-based ints internally (the instance file format is 1-based).
Edges are identified by their index in the construction order; a reversed
graph keeps edge ids aligned with the original, so tree edges computed on
the reverse map back 1:1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from heapq import heappop, heappush
from typing import Iterable, Sequence

INF = math.inf

_MAX_WEIGHT = 2**63 - 1


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    cost: int
    length: int


class Digraph:
    """Immutable directed multigraph with per-edge cost and length.

    Parallel edges and self-loops are permitted; self-loops are ignored by
    every solver (they can never lie on a shortest path or in a tree).
    All operations are pure, so instances are safe to share across threads.
    """

    __slots__ = ("n", "edges", "out_edges", "in_edges", "_reverse")

    def __init__(self, n: int, edges: Iterable[tuple[int, int, int, int]]):
        if n < 0:
            raise ValueError("node count must be >= 0")
        edge_list: list[Edge] = []
        out_edges: list[list[int]] = [[] for _ in range(n)]
        in_edges: list[list[int]] = [[] for _ in range(n)]
        for eid, (tail, head, cost, length) in enumerate(edges):
            if not (0 <= tail < n and 0 <= head < n):
                raise ValueError(f"edge {eid}: endpoint out of range 0..{n - 1}")
            if not (0 <= cost <= _MAX_WEIGHT and 0 <= length <= _MAX_WEIGHT):
                raise ValueError(f"edge {eid}: cost/length must fit in a 64-bit natural")
            edge_list.append(Edge(tail, head, int(cost), int(length)))
            out_edges[tail].append(eid)
            in_edges[head].append(eid)
        self.n = n
        self.edges = tuple(edge_list)
        self.out_edges = tuple(tuple(v) for v in out_edges)
        self.in_edges = tuple(tuple(v) for v in in_edges)
        self._reverse = None

    @property
    def m(self) -> int:
        return len(self.edges)

    def reverse(self) -> "Digraph":
        """Graph with every edge (u,v) flipped to (v,u); edge ids are preserved."""
        if self._reverse is None:
            rev = Digraph(self.n, [(e.head, e.tail, e.cost, e.length) for e in self.edges])
            rev._reverse = self
            self._reverse = rev
        return self._reverse

    def edge_cost(self, edge_ids: Iterable[int]) -> int:
        return sum(self.edges[eid].cost for eid in edge_ids)

    def edge_length(self, edge_ids: Iterable[int]) -> int:
        return sum(self.edges[eid].length for eid in edge_ids)

    def total_length(self) -> int:
        return sum(e.length for e in self.edges)

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m={self.m})"


def shortest_lengths_from(
    g: Digraph, source: int, edge_ids: frozenset[int] | None = None
) -> list[int | float]:
    """Exact single-source shortest path lengths under the length metric.

    Unreachable nodes map to INF.  If edge_ids is given, only those edges
    are considered (used to evaluate subgraph solutions).
    """
    dist: list[int | float] = [INF] * g.n
    dist[source] = 0
    heap: list[tuple[int, int]] = [(0, source)]
    while heap:
        d, u = heappop(heap)
        if d > dist[u]:
            continue
        for eid in g.out_edges[u]:
            if edge_ids is not None and eid not in edge_ids:
                continue
            e = g.edges[eid]
            nd = d + e.length
            if nd < dist[e.head]:
                dist[e.head] = nd
                heappush(heap, (nd, e.head))
    return dist


def all_pairs_shortest_lengths(
    g: Digraph, edge_ids: frozenset[int] | None = None
) -> list[list[int | float]]:
    """All-pairs shortest lengths via one Dijkstra per source."""
    return [shortest_lengths_from(g, u, edge_ids) for u in range(g.n)]


def cheapest_path_lengths(g: Digraph, source: int) -> list[tuple]:
    """Per node, the (cost, edge count, length) of the cheapest path from source.

    The key is lexicographic, so among minimum-cost paths the fewest-edge one
    is preferred, and among those the shortest.  Used to bound how long a
    budget-limited path table really needs to be.
    """
    best: list[tuple] = [(INF, INF, INF)] * g.n
    best[source] = (0, 0, 0)
    heap: list[tuple] = [(0, 0, 0, source)]
    while heap:
        c, k, l, u = heappop(heap)
        if (c, k, l) > best[u]:
            continue
        for eid in g.out_edges[u]:
            e = g.edges[eid]
            cand = (c + e.cost, k + 1, l + e.length)
            if cand < best[e.head]:
                best[e.head] = cand
                heappush(heap, (*cand, e.head))
    return best


@dataclass(frozen=True)
class PathWitness:
    """A certified path: consecutive edge ids plus verified totals.

    The empty sequence is the trivial u-u path with totals 0.  total_cost is
    a float when the path was priced under external real weights.
    """

    edges: tuple[int, ...]
    total_cost: int | float
    total_length: int

    def verify(self, g: Digraph, weights: Sequence[float] | None = None) -> bool:
        """Re-check connectivity and totals against the edge list."""
        prev_head = None
        length = 0
        cost: int | float = 0
        for eid in self.edges:
            e = g.edges[eid]
            if prev_head is not None and e.tail != prev_head:
                return False
            prev_head = e.head
            length += e.length
            cost += weights[eid] if weights is not None else e.cost
        return length == self.total_length and cost == self.total_cost


@dataclass(frozen=True)
class TreeSolution:
    """An out-arborescence rooted at root with per-terminal achieved distances."""

    root: int
    edges: frozenset[int]
    distances: dict[int, int] = field(default_factory=dict)

    def cost(self, g: Digraph) -> int:
        return g.edge_cost(self.edges)


def is_out_arborescence(g: Digraph, edge_ids: frozenset[int], root: int) -> bool:
    """True iff the edge set forms an out-arborescence rooted at root.

    Every non-root node touched by an edge has in-degree exactly 1, the root
    has in-degree 0, and every edge is reachable from the root (which rules
    out cycles).
    """
    indeg: dict[int, int] = {}
    for eid in edge_ids:
        e = g.edges[eid]
        if e.tail == e.head:
            return False
        indeg[e.head] = indeg.get(e.head, 0) + 1
    if indeg.get(root, 0) != 0:
        return False
    if any(d != 1 for v, d in indeg.items() if v != root):
        return False
    # BFS from root over the set; all edges must be reached
    seen = {root}
    frontier = [root]
    reached = 0
    adj: dict[int, list[int]] = {}
    for eid in edge_ids:
        adj.setdefault(g.edges[eid].tail, []).append(eid)
    while frontier:
        u = frontier.pop()
        for eid in adj.get(u, ()):
            reached += 1
            h = g.edges[eid].head
            if h not in seen:
                seen.add(h)
                frontier.append(h)
    return reached == len(edge_ids)


def tree_distances(g: Digraph, edge_ids: frozenset[int], root: int) -> dict[int, int]:
    """Distances from root along the arborescence edges (unique tree paths)."""
    dist = {root: 0}
    adj: dict[int, list[int]] = {}
    for eid in edge_ids:
        adj.setdefault(g.edges[eid].tail, []).append(eid)
    frontier = [root]
    while frontier:
        u = frontier.pop()
        for eid in adj.get(u, ()):
            e = g.edges[eid]
            dist[e.head] = dist[u] + e.length
            frontier.append(e.head)
    return dist
