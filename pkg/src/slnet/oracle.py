"""Exact brute-force solvers for desk-scale ground truth.

Subsets are enumerated in non-decreasing total cost (heap over the subset
lattice, each subset generated once by appending edges of higher index), so
the first feasible subset is an optimum.  Caps are hard errors: a silently
truncated oracle would poison every test that relies on it.
"""
from __future__ import annotations

from fractions import Fraction
from heapq import heappop, heappush

from .errors import CapExceeded, Infeasible
from .graphs import (
    INF,
    Digraph,
    TreeSolution,
    all_pairs_shortest_lengths,
    shortest_lengths_from,
    tree_distances,
)
from .instances import NdbdInstance, SlstInstance, SpannerInstance

DSLST_EDGE_CAP = 20
SUBGRAPH_EDGE_CAP = 16


def _arborescence_reaches_all(g: Digraph, subset: tuple[int, ...], root: int) -> bool:
    """True iff the subset is an out-arborescence rooted at root (heads already distinct)."""
    adj: dict[int, list[int]] = {}
    for eid in subset:
        adj.setdefault(g.edges[eid].tail, []).append(eid)
    seen = {root}
    stack = [root]
    reached = 0
    while stack:
        u = stack.pop()
        for eid in adj.get(u, ()):
            reached += 1
            h = g.edges[eid].head
            if h not in seen:
                seen.add(h)
                stack.append(h)
    return reached == len(subset)


def exact_dslst(inst: SlstInstance, k: int) -> TreeSolution:
    """Cheapest root-rooted out-arborescence covering >= k terminals.

    Distance bounds are enforced exactly (no slack).  Raises CapExceeded
    beyond DSLST_EDGE_CAP edges and Infeasible when no subset works.
    """
    g = inst.graph
    if g.m > DSLST_EDGE_CAP:
        raise CapExceeded(f"exact_dslst handles at most {DSLST_EDGE_CAP} edges, got {g.m}")
    if k < 0 or k > len(inst.terminals):
        raise ValueError("k must be between 0 and the number of terminals")
    root = inst.root
    # self-loops and edges into the root can never appear in an arborescence
    pool = [
        eid
        for eid, e in enumerate(g.edges)
        if e.tail != e.head and e.head != root
    ]
    costs = [g.edges[eid].cost for eid in pool]
    heap: list[tuple[int, tuple[int, ...]]] = [(0, ())]
    while heap:
        cost, subset = heappop(heap)
        edge_ids = tuple(pool[i] for i in subset)
        heads = [g.edges[eid].head for eid in edge_ids]
        distinct = len(set(heads)) == len(heads)
        if distinct:
            if _arborescence_reaches_all(g, edge_ids, root):
                dist = tree_distances(g, frozenset(edge_ids), root)
                covered = {
                    t: dist[t]
                    for t in inst.terminals
                    if t in dist and dist[t] <= inst.bounds[t]
                }
                if len(covered) >= k:
                    return TreeSolution(root, frozenset(edge_ids), covered)
            last = subset[-1] if subset else -1
            for j in range(last + 1, len(pool)):
                heappush(heap, (cost + costs[j], subset + (j,)))
        # duplicate heads: every superset in this branch stays invalid
    raise Infeasible(f"no {k}-terminal tree meets the distance bounds")


def _subset_meets_bounds(
    g: Digraph, edge_ids: frozenset[int], bounds: list[list]
) -> bool:
    for u in range(g.n):
        dist = shortest_lengths_from(g, u, edge_ids)
        for v in range(g.n):
            if dist[v] > bounds[u][v]:
                return False
    return True


def _cheapest_feasible_subgraph(
    g: Digraph, bounds: list[list]
) -> frozenset[int] | None:
    """Min-cost edge subset meeting per-pair distance bounds; None if even G fails.

    Edges whose removal alone breaks a bound are forced into every candidate,
    which shrinks the searched lattice considerably.
    """
    all_edges = frozenset(e for e in range(g.m) if g.edges[e].tail != g.edges[e].head)
    if not _subset_meets_bounds(g, all_edges, bounds):
        return None
    forced = [
        eid
        for eid in sorted(all_edges)
        if not _subset_meets_bounds(g, all_edges - {eid}, bounds)
    ]
    base = frozenset(forced)
    pool = [eid for eid in sorted(all_edges) if eid not in base]
    costs = [g.edges[eid].cost for eid in pool]
    heap: list[tuple[int, tuple[int, ...]]] = [(0, ())]
    while heap:
        cost, subset = heappop(heap)
        candidate = base | {pool[i] for i in subset}
        if _subset_meets_bounds(g, candidate, bounds):
            return candidate
        last = subset[-1] if subset else -1
        for j in range(last + 1, len(pool)):
            heappush(heap, (cost + costs[j], subset + (j,)))
    return None  # pragma: no cover - the full edge set is feasible


def exact_ndbd(inst: NdbdInstance) -> frozenset[int]:
    """Cheapest spanning subgraph with all pairwise distances <= the bound."""
    g = inst.graph
    if g.m > SUBGRAPH_EDGE_CAP:
        raise CapExceeded(f"exact_ndbd handles at most {SUBGRAPH_EDGE_CAP} edges, got {g.m}")
    bounds = [[inst.bound] * g.n for _ in range(g.n)]
    result = _cheapest_feasible_subgraph(g, bounds)
    if result is None:
        raise Infeasible("the graph itself violates the distance bound")
    return result


def exact_spanner(inst: SpannerInstance) -> frozenset[int]:
    """Cheapest spanning subgraph with stretch <= alpha for every reachable pair."""
    g = inst.graph
    if g.m > SUBGRAPH_EDGE_CAP:
        raise CapExceeded(f"exact_spanner handles at most {SUBGRAPH_EDGE_CAP} edges, got {g.m}")
    base = all_pairs_shortest_lengths(g)
    bounds = [
        [INF if base[u][v] == INF else Fraction(inst.stretch) * base[u][v] for v in range(g.n)]
        for u in range(g.n)
    ]
    result = _cheapest_feasible_subgraph(g, bounds)
    assert result is not None  # G is always a feasible spanner of itself
    return result
