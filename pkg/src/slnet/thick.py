"""Settling thick pairs: sampled roots with shallow-light in- and out-trees.

An out-tree from a sampled root reaches every terminal within (1+eps1) of its
bound; the in-tree is the same construction on the reversed graph, whose edge
ids map back 1:1.  Any pair (u,v) routed through a sampled root r then has a
u->r->v route of length at most 2(1+eps1) times the bound.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from heapq import heappop, heappush
from typing import Iterable, Mapping

from .graphs import INF, Digraph, TreeSolution, all_pairs_shortest_lengths
from .slst import ShallowLightSolver


@dataclass(frozen=True)
class SampleConfig:
    """Root-sample size (defaults to ceil(3*sqrt(n)*ln n), clamped to [1, n]) and seed."""

    delta: int | None = None
    seed: int = 0


def default_delta(n: int) -> int:
    if n <= 1:
        return min(1, n)
    return min(n, math.ceil(3.0 * math.sqrt(n) * math.log(n)))


def sample_roots(n: int, cfg: SampleConfig) -> list[int]:
    """Uniform sample of distinct nodes, without replacement, sorted for iteration."""
    delta = cfg.delta if cfg.delta is not None else default_delta(n)
    delta = max(1, min(delta, n))
    rng = random.Random(cfg.seed)
    return sorted(rng.sample(range(n), delta))


def build_root_trees(
    g: Digraph,
    root: int,
    out_bounds: Mapping[int, int | Fraction],
    in_bounds: Mapping[int, int | Fraction],
    eps1: Fraction | float,
    level: int,
    out_solver: ShallowLightSolver | None = None,
    in_solver: ShallowLightSolver | None = None,
) -> tuple[TreeSolution, TreeSolution]:
    """Shallow-light out-tree and in-tree rooted at root.

    The in-tree is computed on the reversed graph and returned with original
    edge ids; its distances map measures node-to-root lengths.  Pass shared
    solvers to reuse path tables across roots.  An empty bounds map (all
    nodes on that side unreachable) yields an empty tree.
    """
    if out_solver is None:
        out_solver = ShallowLightSolver(g, eps1)
    if in_solver is None:
        in_solver = ShallowLightSolver(g.reverse(), eps1)
    empty = TreeSolution(root, frozenset(), {})
    out_tree = out_solver.solve(level, root, dict(out_bounds)) if out_bounds else empty
    in_tree = in_solver.solve(level, root, dict(in_bounds)) if in_bounds else empty
    return out_tree, in_tree


def union_thick(trees: Iterable[TreeSolution]) -> frozenset[int]:
    """Union of all tree edge sets; shared edges are counted once."""
    edges: set[int] = set()
    for tree in trees:
        edges |= tree.edges
    return frozenset(edges)


def _sp_tree_parents(g: Digraph, source: int) -> list[int]:
    """Deterministic shortest-path tree parents (edge ids) from source."""
    dist: list = [INF] * g.n
    par = [-1] * g.n
    dist[source] = 0
    heap: list[tuple] = [(0, source)]
    while heap:
        d, u = heappop(heap)
        if d > dist[u]:
            continue
        for eid in g.out_edges[u]:
            e = g.edges[eid]
            if e.tail == e.head:
                continue
            nd = d + e.length
            if nd < dist[e.head] or (nd == dist[e.head] and -1 < par[e.head] and eid < par[e.head]):
                dist[e.head] = nd
                par[e.head] = eid
                heappush(heap, (nd, e.head))
    return par


def _walk_nodes(g: Digraph, par: list[int], node: int, source: int) -> list[int] | None:
    nodes = [node]
    while node != source:
        eid = par[node]
        if eid < 0:
            return None
        node = g.edges[eid].tail
        nodes.append(node)
    return nodes


def classify_pairs_diagnostic(g: Digraph, bound: int) -> dict[tuple[int, int], str]:
    """Per-pair thin/thick/unknown classification; diagnostics only.

    W = {w : d(u,w) + d(w,v) <= bound} is a walk-based superset of the nodes
    on bound-respecting simple paths, so |W| <= sqrt(n) soundly means thin.
    Thick is confirmed only when more than sqrt(n) nodes w have disjoint
    shortest u->w and w->v paths (a genuine simple path through w); otherwise
    the pair is reported unknown.
    """
    apsp = all_pairs_shortest_lengths(g)
    root_n = math.sqrt(g.n)
    out_par = [_sp_tree_parents(g, u) for u in range(g.n)]
    rev = g.reverse()
    in_par = [_sp_tree_parents(rev, v) for v in range(g.n)]
    result: dict[tuple[int, int], str] = {}
    for u in range(g.n):
        for v in range(g.n):
            walk_set = [w for w in range(g.n) if apsp[u][w] + apsp[w][v] <= bound]
            if len(walk_set) <= root_n:
                result[(u, v)] = "thin"
                continue
            confirmed = 0
            for w in walk_set:
                up = _walk_nodes(g, out_par[u], w, u)
                down = _walk_nodes(rev, in_par[v], w, v)
                if up is None or down is None:
                    continue
                if len(set(up) & set(down)) == 1:  # only w itself
                    confirmed += 1
            result[(u, v)] = "thick" if confirmed > root_n else "unknown"
    return result
