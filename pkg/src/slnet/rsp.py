"""Restricted (length-bounded) shortest paths.

Three variants over the same dynamic program:

* rsp_exact            -- minimum cost subject to total length <= D, exact,
                          pseudo-polynomial in D;
* min_cost_path_relaxed -- cost no worse than the exact optimum at bound D,
                          length at most (1+eps)*D, via length scaling;
* min_weight_path_hassin -- length bound respected exactly, weight within
                          (1+eps) of optimal under external non-negative real
                          weights, via test-and-scale on the weights.

All ties are broken toward fewer edges, then the lexicographically smallest
edge-id sequence, which makes every result deterministic.  Functions return
None when no feasible path exists.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .errors import BudgetTooLarge
from .graphs import INF, Digraph, PathWitness

DEFAULT_CELL_CAP = 10**6


class _SuffixTable:
    """DP toward a fixed target node.

    rows[b][w] is the lexicographically minimal (value, edge count) over all
    w->target paths whose per-edge budgets sum to at most b.  Budgets must be
    non-negative ints; values non-negative ints or floats.
    """

    __slots__ = ("vals", "neds", "cap")

    def __init__(
        self,
        g: Digraph,
        target: int,
        cap: int,
        values: Sequence,
        budgets: Sequence[int],
        cell_cap: int = DEFAULT_CELL_CAP,
    ):
        n = g.n
        if n * (cap + 1) > cell_cap:
            raise BudgetTooLarge(f"table needs {n * (cap + 1)} cells, cap is {cell_cap}")
        pos_edges = []
        zero_edges = []
        for eid, e in enumerate(g.edges):
            if e.tail == e.head:
                continue
            item = (e.tail, e.head, values[eid], budgets[eid])
            (pos_edges if budgets[eid] > 0 else zero_edges).append(item)
        vals: list[list] = []
        neds: list[list] = []
        for b in range(cap + 1):
            if b == 0:
                vrow = [INF] * n
                krow = [INF] * n
                vrow[target] = 0
                krow[target] = 0
            else:
                vrow = vals[b - 1].copy()
                krow = neds[b - 1].copy()
                for tail, head, val, bud in pos_edges:
                    pb = b - bud
                    if pb < 0:
                        continue
                    cv = vals[pb][head]
                    if cv == INF:
                        continue
                    nv = cv + val
                    if nv < vrow[tail] or (nv == vrow[tail] and neds[pb][head] + 1 < krow[tail]):
                        vrow[tail] = nv
                        krow[tail] = neds[pb][head] + 1
            if zero_edges:
                # zero-budget edges chain within the row; iterate to a fixpoint
                changed = True
                while changed:
                    changed = False
                    for tail, head, val, _ in zero_edges:
                        cv = vrow[head]
                        if cv == INF:
                            continue
                        nv = cv + val
                        if nv < vrow[tail] or (nv == vrow[tail] and krow[head] + 1 < krow[tail]):
                            vrow[tail] = nv
                            krow[tail] = krow[head] + 1
                            changed = True
            vals.append(vrow)
            neds.append(krow)
        self.vals = vals
        self.neds = neds
        self.cap = cap

    def best(self, b: int, node: int) -> tuple:
        return self.vals[b][node], self.neds[b][node]


def _greedy_lex_path(
    g: Digraph,
    table: _SuffixTable,
    source: int,
    target: int,
    values: Sequence,
    budgets: Sequence[int],
    start: int | None = None,
) -> list[int] | None:
    """Lexicographically smallest edge-id sequence among table-optimal paths.

    Walks forward from the source, at each step taking the smallest edge id
    whose suffix-table entry certifies an optimal completion.
    """
    b = table.cap if start is None else start
    val, k = table.best(b, source)
    if val == INF:
        return None
    edges: list[int] = []
    node = source
    while not (node == target and k == 0):
        for eid in g.out_edges[node]:
            e = g.edges[eid]
            if e.tail == e.head:
                continue
            b2 = b - budgets[eid]
            if b2 < 0:
                continue
            cv, ck = table.best(b2, e.head)
            if cv == INF:
                continue
            if cv + values[eid] == val and ck + 1 == k:
                edges.append(eid)
                node, b, val, k = e.head, b2, cv, ck
                break
        else:  # pragma: no cover - table and greedy disagree
            raise AssertionError("path reconstruction failed")
    return edges


def _witness(g: Digraph, edges: list[int], weights: Sequence[float] | None = None) -> PathWitness:
    length = sum(g.edges[eid].length for eid in edges)
    if weights is None:
        cost: int | float = sum(g.edges[eid].cost for eid in edges)
    else:
        cost = sum(weights[eid] for eid in edges)
    return PathWitness(tuple(edges), cost, length)


def rsp_exact(
    g: Digraph, source: int, target: int, bound: int, cell_cap: int = DEFAULT_CELL_CAP
) -> PathWitness | None:
    """Minimum-cost path with total length <= bound, by DP over (node, budget).

    The bound is clamped to the total edge length (larger budgets cannot
    help).  Raises BudgetTooLarge when the table would exceed cell_cap cells;
    returns None when no such path exists.
    """
    if bound < 0:
        raise ValueError("length bound must be >= 0")
    if source == target:
        return PathWitness((), 0, 0)
    cap = min(int(bound), g.total_length())
    costs = [e.cost for e in g.edges]
    lengths = [e.length for e in g.edges]
    table = _SuffixTable(g, target, cap, costs, lengths, cell_cap)
    edges = _greedy_lex_path(g, table, source, target, costs, lengths)
    if edges is None:
        return None
    return _witness(g, edges)


def min_cost_path_relaxed(
    g: Digraph,
    source: int,
    target: int,
    bound: int | Fraction,
    eps: Fraction | float,
    cell_cap: int = DEFAULT_CELL_CAP,
) -> PathWitness | None:
    """Length-relaxed, cost-exact variant.

    Returns a path of length <= (1+eps)*bound whose cost is at most the
    optimum among paths of length <= bound; None only if no path of length
    <= bound exists.  Lengths are scaled by eps*bound/n and the exact DP runs
    with budget ceil(n/eps), which keeps both guarantees since a simple path
    has at most n-1 edges.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be > 0")
    if bound < 0:
        raise ValueError("length bound must be >= 0")
    if source == target:
        return PathWitness((), 0, 0)
    if bound == 0:
        return rsp_exact(g, source, target, 0, cell_cap)
    n = g.n
    theta = Fraction(bound) * eps / n
    costs = [e.cost for e in g.edges]
    scaled = [int(Fraction(e.length) / theta) for e in g.edges]
    cap = math.ceil(Fraction(n) / eps)
    table = _SuffixTable(g, target, cap, costs, scaled, cell_cap)
    edges = _greedy_lex_path(g, table, source, target, costs, scaled)
    if edges is None:
        return None
    return _witness(g, edges)


def min_weight_path_hassin(
    g: Digraph,
    weights: Sequence[float],
    source: int,
    target: int,
    bound: int | Fraction,
    eps: float,
    cell_cap: int = DEFAULT_CELL_CAP,
) -> PathWitness | None:
    """Weight-approximate, length-exact variant (LP pricing oracle).

    Returns a path of length <= bound (exactly) whose weight under the given
    non-negative real weights is at most (1+eps) times the optimum; None iff
    no path of length <= bound exists.  Uses geometric test-and-scale on the
    weights so the table size is independent of the length bound.
    """
    if eps <= 0:
        raise ValueError("eps must be > 0")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be non-negative")
    D = math.floor(bound)
    if D < 0:
        return None
    if source == target:
        return PathWitness((), 0.0, 0)
    n = g.n
    lengths = [e.length for e in g.edges]

    def scaled_table(sval: Sequence[int], cap: int) -> _SuffixTable:
        return _SuffixTable(g, target, cap, lengths, sval, cell_cap)

    # zero-weight shortcut: a weight-0 path within the bound is exactly optimal
    indicator = [0 if weights[eid] == 0 else 1 for eid in range(g.m)]
    t0 = scaled_table(indicator, 0)
    lz, _ = t0.best(0, source)
    if lz <= D:
        edges = _greedy_lex_path(g, t0, source, target, lengths, indicator)
        return _witness(g, edges, weights)

    # feasibility and an upper bound from the minimum-length path
    free = [0] * g.m
    tfree = scaled_table(free, 0)
    lmin, _ = tfree.best(0, source)
    if lmin == INF or lmin > D:
        return None
    ub_edges = _greedy_lex_path(g, tfree, source, target, lengths, free)
    ub = sum(weights[eid] for eid in ub_edges)
    lb = min(w for w in weights if w > 0)

    # narrow [lb, ub] geometrically; each test runs the DP with budget n
    for _ in range(200):
        if ub <= 4 * lb:
            break
        v = math.sqrt(lb * ub)
        if not (lb < v < ub):
            break
        theta = v / n
        sval = [int(w // theta) for w in weights]
        tt = scaled_table(sval, n)
        lt, _ = tt.best(n, source)
        if lt <= D:
            ub = min(ub, 2 * v)
        else:
            lb = v

    theta = eps * lb / n
    sval = [int(w // theta) for w in weights]
    smax = math.ceil(ub / theta)
    table = scaled_table(sval, smax)
    sigma = None
    for b in range(smax + 1):
        lv, _ = table.best(b, source)
        if lv <= D:
            sigma = b
            break
    if sigma is None:  # pragma: no cover - ub certifies feasibility
        raise AssertionError("weight upper bound did not certify a feasible row")
    edges = _greedy_lex_path(g, table, source, target, lengths, sval, start=sigma)
    return _witness(g, edges, weights)
