"""Directed shallow-light Steiner trees via recursive greedy.

The solver operates in levels.  Level 1 takes, per terminal, a cheapest path
within the terminal's length bound and unions the k cheapest.  Level i >= 2
repeatedly picks the lowest relative-cost candidate (branch node v, terminal
count k', connection path option) where the subtree below v comes from a
level-(i-1) call with bounds reduced by the connection path's length divided
by (1+eps1); each covered terminal ends up within (1+eps1) of its bound.

Candidate connection paths come from exact per-target DP tables over the
length budget, compressed to their (cost, edges) breakpoints.  One table per
target answers every (source, bound) query on the shared graph, so the tables
are built once and reused across roots and recursion levels.  When a table
would exceed the cell cap, a per-query scaled-DP fallback provides the same
MinCostPath contract (cost no worse than the bound-respecting optimum, length
within (1+eps1) of the bound).

Bounds are tracked as exact Fractions so recursion-level arithmetic and all
tie-breaking stay deterministic.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from heapq import heappop, heappush
from typing import Iterable, Mapping

from .errors import Infeasible
from .graphs import INF, Digraph, TreeSolution, cheapest_path_lengths, shortest_lengths_from
from .rsp import DEFAULT_CELL_CAP, min_cost_path_relaxed


@dataclass(frozen=True)
class SlstParams:
    """Level, length slack, coverage target, and optional heuristic pruning caps.

    With either pruning cap set the approximation guarantee is forfeited and
    solver output is flagged as pruned.
    """

    level: int = 2
    eps1: Fraction = Fraction(1, 4)
    k: int | None = None
    max_kprime: int | None = None
    max_rungs: int | None = None


@dataclass(frozen=True)
class PartialTree:
    """One greedy step: a tree fragment, its certified terminals, and relative cost."""

    edges: frozenset[int]
    covered: dict[int, int]
    cost: int
    rho: Fraction | float  # INF when no candidate was feasible

    @property
    def empty(self) -> bool:
        return not self.edges and not self.covered


def ratio_bound(level: int, k: int) -> float:
    """Cost-approximation ceiling 2*i^2*(i-1)*k^(1/i)/2^(1/i) for level i >= 2."""
    if level < 2:
        raise ValueError("the ratio bound applies to levels >= 2")
    if k < 1:
        raise ValueError("k must be >= 1")
    return 2.0 * level * level * (level - 1) * (k ** (1.0 / level)) / (2.0 ** (1.0 / level))


class _BoundedPathTable:
    """Breakpoints of the exact bounded-path DP toward one target.

    For every source the map budget -> (best cost, edge count) is a step
    function; only its breakpoints are kept, each with the parent edge that
    realized the value, so paths are reconstructed by walking parents.
    """

    __slots__ = ("g", "target", "cap", "bp")

    def __init__(self, g: Digraph, target: int, cap: int):
        n = g.n
        pos_edges = []
        zero_edges = []
        for eid, e in enumerate(g.edges):
            if e.tail == e.head:
                continue
            item = (eid, e.tail, e.head, e.cost, e.length)
            (pos_edges if e.length > 0 else zero_edges).append(item)
        max_len = max((e.length for e in g.edges if e.length > 0), default=1)
        history: deque[tuple[list, list]] = deque(maxlen=max_len)  # trailing rows
        par = [-1] * n
        bp: list[list[tuple[int, int, int, int]]] = [[] for _ in range(n)]
        vrow = [INF] * n
        krow = [INF] * n
        vrow[target] = 0
        krow[target] = 0
        for b in range(cap + 1):
            if b > 0:
                vrow = vrow.copy()
                krow = krow.copy()
                for eid, tail, head, cost, length in pos_edges:
                    pb = b - length
                    if pb < 0:
                        continue
                    # history holds rows pb in [b - len(history), b - 1]
                    pv, pk = history[pb - b + len(history)]
                    cv = pv[head]
                    if cv == INF:
                        continue
                    nv = cv + cost
                    nk = pk[head] + 1
                    if nv < vrow[tail] or (nv == vrow[tail] and nk < krow[tail]):
                        vrow[tail] = nv
                        krow[tail] = nk
                        par[tail] = eid
            if zero_edges:
                changed = True
                while changed:
                    changed = False
                    for eid, tail, head, cost, _ in zero_edges:
                        cv = vrow[head]
                        if cv == INF:
                            continue
                        nv = cv + cost
                        nk = krow[head] + 1
                        if nv < vrow[tail] or (nv == vrow[tail] and nk < krow[tail]):
                            vrow[tail] = nv
                            krow[tail] = nk
                            par[tail] = eid
                            changed = True
            for src in range(n):
                if vrow[src] != INF:
                    lst = bp[src]
                    if not lst or lst[-1][1] != vrow[src] or lst[-1][2] != krow[src]:
                        lst.append((b, vrow[src], krow[src], par[src]))
            history.append((vrow, krow))
        self.g = g
        self.target = target
        self.cap = cap
        self.bp = bp

    def _record(self, src: int, budget: int) -> tuple[int, int, int, int] | None:
        if budget < 0:
            return None
        budget = min(budget, self.cap)
        lst = self.bp[src]
        idx = bisect_right(lst, budget, key=lambda rec: rec[0]) - 1
        return lst[idx] if idx >= 0 else None

    def query(self, src: int, budget: int) -> tuple[int, int] | None:
        """(cost, edge count) of the best path from src within the budget."""
        rec = self._record(src, budget)
        return None if rec is None else (rec[1], rec[2])

    def path(self, src: int, budget: int) -> list[int] | None:
        """Edge ids of the recorded optimal path, by parent walking."""
        rec = self._record(src, budget)
        if rec is None:
            return None
        edges: list[int] = []
        node = src
        b = min(budget, self.cap)
        while True:
            rec = self._record(node, b)
            assert rec is not None
            _, _, k, par = rec
            if k == 0:
                return edges
            e = self.g.edges[par]
            edges.append(par)
            b -= e.length
            node = e.head

    def breakpoints(self, src: int) -> list[tuple[int, int, int, int]]:
        return self.bp[src]


class ShallowLightSolver:
    """Per-graph engine; share one instance across roots to reuse path tables."""

    def __init__(
        self,
        g: Digraph,
        eps1: Fraction | float,
        max_bound: int | Fraction | None = None,
        max_kprime: int | None = None,
        max_rungs: int | None = None,
        cell_cap: int = DEFAULT_CELL_CAP,
    ):
        self.g = g
        self.eps1 = Fraction(eps1)
        if self.eps1 <= 0:
            raise ValueError("eps1 must be > 0")
        self.slack = 1 + self.eps1
        self.max_kprime = max_kprime
        self.max_rungs = max_rungs
        self.pruned = max_kprime is not None or max_rungs is not None
        self.cell_cap = cell_cap
        self._tables: dict[int, _BoundedPathTable] = {}
        self._sp_cache: dict[int, list] = {}
        self._options_cache: dict[tuple[int, int], list] = {}
        self._lambda_cap: int | None = None
        self._cap = 0
        if max_bound is not None:
            self._ensure_cap(math.floor(max_bound))
        self._fallback_rungs: list[Fraction] | None = None

    # ---- shared path machinery ------------------------------------------

    def _ensure_cap(self, need: int) -> None:
        if self._lambda_cap is None:
            lam = 0
            for src in range(self.g.n):
                for c, k, l in cheapest_path_lengths(self.g, src):
                    if c != INF and l > lam:
                        lam = l
            self._lambda_cap = lam
        cap = max(need, self._lambda_cap, 0)
        if cap > self._cap:
            self._cap = cap
            self._tables.clear()
            self._options_cache.clear()

    @property
    def _use_tables(self) -> bool:
        return self.g.n * (self._cap + 1) <= self.cell_cap

    def _table(self, target: int) -> _BoundedPathTable:
        tbl = self._tables.get(target)
        if tbl is None:
            tbl = _BoundedPathTable(self.g, target, self._cap)
            self._tables[target] = tbl
        return tbl

    def _sp(self, src: int) -> list:
        row = self._sp_cache.get(src)
        if row is None:
            row = shortest_lengths_from(self.g, src)
            self._sp_cache[src] = row
        return row

    def _best_bounded(self, src: int, tgt: int, budget: int) -> tuple[int, int] | None:
        """MinCostPath cost query; exact when tables are in use.

        The fallback's scaled DP is sized by n/eps1, not by the budget, so it
        keeps the standard cell cap even when the shared tables would not fit.
        """
        if budget < 0:
            return None
        if self._use_tables:
            return self._table(tgt).query(src, budget)
        w = min_cost_path_relaxed(self.g, src, tgt, budget, self.eps1)
        return None if w is None else (w.total_cost, len(w.edges))

    def _best_bounded_path(self, src: int, tgt: int, budget: int) -> list[int] | None:
        if budget < 0:
            return None
        if self._use_tables:
            return self._table(tgt).path(src, budget)
        w = min_cost_path_relaxed(self.g, src, tgt, budget, self.eps1)
        return None if w is None else list(w.edges)

    def _ladder(self) -> list[Fraction]:
        """Length-bound rungs 0, 1, (1+eps1), (1+eps1)^2, ... up to the total length."""
        if self._fallback_rungs is None:
            total = self.g.total_length()
            rungs = [Fraction(0)]
            rung = Fraction(1)
            rungs.append(rung)
            while rung < total:
                rung *= self.slack
                rungs.append(rung)
            self._fallback_rungs = rungs
        return self._fallback_rungs

    def _options(self, root: int, v: int) -> list[tuple[int, int, tuple[int, ...]]]:
        """Distinct connection-path choices root->v as (cost, length, edges).

        With tables this is the full (cost, edge count) breakpoint frontier,
        a superset of the geometric ladder the greedy nominally scans; with
        the fallback provider the ladder rungs are evaluated directly.
        Ordered by increasing length; index order is the rung tie-break.
        """
        key = (root, v)
        opts = self._options_cache.get(key)
        if opts is not None:
            return opts
        opts = []
        if self._use_tables:
            tbl = self._table(v)
            for b, cost, k, _ in tbl.breakpoints(root):
                path = tbl.path(root, b)
                opts.append((cost, sum(self.g.edges[e].length for e in path), tuple(path)))
        else:
            seen = set()
            for rung in self._ladder():
                w = min_cost_path_relaxed(self.g, root, v, rung, self.eps1)
                if w is None:
                    continue
                sig = (w.total_cost, w.total_length)
                if sig not in seen:
                    seen.add(sig)
                    opts.append((w.total_cost, w.total_length, w.edges))
        if self.max_rungs is not None:
            opts = opts[: self.max_rungs]
        self._options_cache[key] = opts
        return opts

    # ---- greedy ----------------------------------------------------------

    def solve(
        self, level: int, root: int, bounds: Mapping[int, int | Fraction], k: int | None = None
    ) -> TreeSolution:
        """Run the full greedy; raises Infeasible when fewer than k terminals
        are within their bounds by exact shortest-path length."""
        if level < 1:
            raise ValueError("level must be >= 1")
        if not bounds:
            raise ValueError("at least one terminal is required")
        if k is None:
            k = len(bounds)
        if not (1 <= k <= len(bounds)):
            raise ValueError("k must be between 1 and the number of terminals")
        self._ensure_cap(max(math.floor(b) for b in bounds.values()))
        fragments = self._solve(level, root, dict(bounds), k, toplevel=True)
        union: set[int] = set()
        for fr in fragments:
            union |= fr
        return self._arborify(union, root, bounds)

    def _solve(
        self,
        level: int,
        root: int,
        bounds: dict[int, Fraction | int],
        k: int,
        toplevel: bool = False,
    ) -> list[frozenset[int]]:
        sp = self._sp(root)
        feasible = {t for t, b in bounds.items() if b >= 0 and sp[t] <= b}
        if len(feasible) < k:
            raise Infeasible(
                f"only {len(feasible)} of the required {k} terminals are within "
                f"their distance bounds from node {root}"
            )
        if level == 1:
            frag = self._level_one_fragment(root, bounds, feasible, k)
            return [frag]
        fragments: list[frozenset[int]] = []
        remaining = dict(bounds)
        while k > 0:
            step = self._best_step(level, root, remaining, k)
            assert step is not None and step.covered, "greedy stalled despite feasibility"
            fragments.append(step.edges)
            for t in step.covered:
                remaining.pop(t, None)
            k -= len(step.covered)
        return fragments

    def _level_one_fragment(
        self,
        root: int,
        bounds: Mapping[int, Fraction | int],
        feasible: set[int],
        k: int,
    ) -> frozenset[int]:
        priced = []
        for t in feasible:
            res = self._best_bounded(root, t, math.floor(bounds[t]))
            assert res is not None
            priced.append((res[0], t))
        priced.sort()
        union: set[int] = set()
        for _, t in priced[:k]:
            union.update(self._best_bounded_path(root, t, math.floor(bounds[t])))
        return frozenset(union)

    def _best_step(
        self, level: int, root: int, bounds: dict[int, Fraction | int], k: int
    ) -> PartialTree | None:
        """One iteration of the greedy: the minimum relative-cost candidate.

        Candidates are scored by connection cost plus the sum of the chosen
        subtree path costs (shared edges would only make the real fragment
        cheaper); ties break on (score, v, k', option index).
        """
        best = None  # (num, den, v, kprime, opt_idx, builder-data)
        terminals = sorted(bounds)
        for v in range(self.g.n):
            options = self._options(root, v)
            for opt_idx, (pcost, plen, pedges) in enumerate(options):
                reduction = Fraction(plen) / self.slack
                if level == 2:
                    entries = []
                    for t in terminals:
                        sub_bound = math.floor(bounds[t] - reduction)
                        if sub_bound < 0 or self._sp(v)[t] > sub_bound:
                            continue
                        res = self._best_bounded(v, t, sub_bound)
                        if res is not None:
                            entries.append((res[0], t, sub_bound))
                    entries.sort()
                    kmax = min(k, len(entries))
                    if self.max_kprime is not None:
                        kmax = min(kmax, self.max_kprime)
                    prefix = pcost
                    for kp in range(1, kmax + 1):
                        prefix += entries[kp - 1][0]
                        cand = (prefix, kp, v, kp, opt_idx)
                        if best is None or self._cand_less(cand, best[0]):
                            best = (cand, pedges, entries[:kp])
                else:
                    sub_bounds = {t: bounds[t] - reduction for t in terminals}
                    kmax = min(k, len(terminals))
                    if self.max_kprime is not None:
                        kmax = min(kmax, self.max_kprime)
                    for kp in range(1, kmax + 1):
                        try:
                            sub_frags = self._solve(level - 1, v, sub_bounds, kp)
                        except Infeasible:
                            break  # larger k' cannot become feasible
                        sub_edges: set[int] = set()
                        for fr in sub_frags:
                            sub_edges |= fr
                        score = pcost + self.g.edge_cost(sub_edges)
                        cand = (score, kp, v, kp, opt_idx)
                        if best is None or self._cand_less(cand, best[0]):
                            best = (cand, pedges, sub_edges)
        if best is None:
            return None
        (num, den, v, kp, opt_idx), pedges, payload = best
        edges = set(pedges)
        if level == 2:
            for cost_t, t, sub_bound in payload:
                edges.update(self._best_bounded_path(v, t, sub_bound))
        else:
            edges |= payload
        covered = self._certify(frozenset(edges), root, bounds)
        cost = self.g.edge_cost(edges)
        return PartialTree(frozenset(edges), covered, cost, Fraction(cost, max(len(covered), 1)))

    @staticmethod
    def _cand_less(a: tuple, b: tuple) -> bool:
        # (num, den, v, kprime, opt_idx): compare num/den by cross-multiplication
        an, ad, av, ak, aj = a
        bn, bd, bv, bk, bj = b
        lhs = an * bd
        rhs = bn * ad
        if lhs != rhs:
            return lhs < rhs
        return (av, ak, aj) < (bv, bk, bj)

    def _certify(
        self, edges: frozenset[int], root: int, bounds: Mapping[int, Fraction | int]
    ) -> dict[int, int]:
        """Terminals whose distance from root inside the fragment is within slack."""
        dist = shortest_lengths_from(self.g, root, edges)
        return {
            t: dist[t] for t, b in bounds.items() if b >= 0 and dist[t] <= self.slack * b
        }

    def _arborify(
        self, edges: set[int], root: int, bounds: Mapping[int, Fraction | int]
    ) -> TreeSolution:
        """Shortest-path arborescence of the fragment union, pruned to covered terminals.

        Path unions may give a node two in-edges; re-rooting on shortest paths
        never lengthens any route and dropping edges never adds cost.
        """
        n = self.g.n
        dist: list = [INF] * n
        par: list[int] = [-1] * n
        dist[root] = 0
        heap: list[tuple] = [(0, root)]
        while heap:
            d, u = heappop(heap)
            if d > dist[u]:
                continue
            for eid in self.g.out_edges[u]:
                if eid not in edges:
                    continue
                e = self.g.edges[eid]
                if e.tail == e.head:
                    continue
                nd = d + e.length
                if nd < dist[e.head]:
                    dist[e.head] = nd
                    par[e.head] = eid
                    heappush(heap, (nd, e.head))
                elif nd == dist[e.head] and par[e.head] >= 0:
                    cur = self.g.edges[par[e.head]]
                    if (e.cost, eid) < (cur.cost, par[e.head]):
                        par[e.head] = eid
        covered = {
            t: dist[t]
            for t, b in bounds.items()
            if b >= 0 and dist[t] <= self.slack * b
        }
        tree_edges: set[int] = set()
        for t in covered:
            node = t
            while node != root:
                eid = par[node]
                if eid in tree_edges:
                    break
                tree_edges.add(eid)
                node = self.g.edges[eid].tail
        return TreeSolution(root, frozenset(tree_edges), covered)


def _prepare(terminals: Iterable[int], bounds: Mapping[int, int | Fraction]) -> dict:
    terms = set(terminals)
    if not terms:
        raise ValueError("at least one terminal is required")
    missing = terms - set(bounds)
    if missing:
        raise ValueError(f"terminals without bounds: {sorted(missing)}")
    return {t: bounds[t] for t in terms}


def shallow_light(
    g: Digraph,
    level: int,
    root: int,
    terminals: Iterable[int],
    bounds: Mapping[int, int | Fraction],
    k: int | None = None,
    eps1: Fraction | float = Fraction(1, 4),
    params: SlstParams | None = None,
) -> TreeSolution:
    """Approximate shallow-light Steiner tree covering at least k terminals.

    Raises Infeasible iff fewer than k terminals have exact shortest-path
    length within their bound.  Every covered terminal's tree distance is at
    most (1+eps1) times its bound.
    """
    d = _prepare(terminals, bounds)
    solver = ShallowLightSolver(
        g,
        eps1,
        max_kprime=params.max_kprime if params else None,
        max_rungs=params.max_rungs if params else None,
    )
    return solver.solve(level, root, d, k)


def level_one(
    g: Digraph,
    root: int,
    terminals: Iterable[int],
    bounds: Mapping[int, int | Fraction],
    k: int | None = None,
    eps1: Fraction | float = Fraction(1, 4),
) -> TreeSolution:
    """Union of the k cheapest bound-respecting paths (shared edges counted once)."""
    return shallow_light(g, 1, root, terminals, bounds, k, eps1)


def best_subtree(
    g: Digraph,
    level: int,
    root: int,
    terminals: Iterable[int],
    bounds: Mapping[int, int | Fraction],
    k: int,
    eps1: Fraction | float = Fraction(1, 4),
) -> PartialTree:
    """A single greedy step; empty PartialTree with rho=INF if nothing is feasible."""
    if level < 2:
        raise ValueError("best_subtree applies to levels >= 2")
    d = _prepare(terminals, bounds)
    solver = ShallowLightSolver(g, eps1)
    solver._ensure_cap(max(math.floor(b) for b in d.values()))
    step = solver._best_step(level, root, d, k)
    if step is None:
        return PartialTree(frozenset(), {}, 0, INF)
    return step
