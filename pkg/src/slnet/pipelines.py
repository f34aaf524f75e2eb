"""End-to-end solvers: bounded-distance network design and light spanners.

Both compose the same two stages.  The LP-plus-rounding stage covers pairs
whose bound-respecting paths live on few nodes; the sampled-root tree stage
covers the rest.  The user-facing eps is split evenly: eps/2 to the LP stage
and eps/2 to the trees' length slack, so a pair routed through a sampled root
stays within 2(1+eps/2) = (2+eps) times its bound.

Stage randomness is derived from the single run seed: rounding uses seed,
root sampling uses seed+1.
"""
from __future__ import annotations

import time
from fractions import Fraction

from .errors import InfeasibleInstance
from .graphs import INF, Digraph, all_pairs_shortest_lengths
from .instances import NdbdInstance, SpannerInstance, check_feasible
from .reports import RunReport
from .slst import ShallowLightSolver
from .thick import SampleConfig, default_delta, sample_roots, union_thick
from .thinlp import PairDemand, round_edges, solve_fractional


def ndbd_demands(inst: NdbdInstance) -> list[PairDemand]:
    """All ordered pairs u != v with the global bound; u = u is vacuous."""
    n = inst.graph.n
    return [PairDemand((u, v), inst.bound) for u in range(n) for v in range(n) if u != v]


def spanner_demands(inst: SpannerInstance) -> list[PairDemand]:
    """Reachable ordered pairs with per-pair bound alpha * d_G(u, v)."""
    base = all_pairs_shortest_lengths(inst.graph)
    out = []
    for u in range(inst.graph.n):
        for v in range(inst.graph.n):
            if u != v and base[u][v] != INF:
                out.append(PairDemand((u, v), inst.stretch * base[u][v]))
    return out


def _gamma(n: int) -> float:
    import math

    return math.sqrt(n) * math.log(n) if n > 1 else 0.0


def verify_solution(
    g: Digraph,
    edge_ids: frozenset[int],
    kind: str,
    bound: int | None = None,
    stretch: Fraction | None = None,
    eps: float | Fraction = 0,
) -> dict:
    """Recompute all distances in the subgraph and compare per-pair bounds.

    worst_violation is the largest distance-to-bound ratio; a pair is
    offending when it exceeds the bicriteria allowance (2(1+eps/2) for the
    bounded-distance problem, alpha(1+eps/2) for spanners).
    """
    eps1 = Fraction(eps) / 2
    if kind == "ndbd":
        if bound is None:
            raise ValueError("ndbd verification needs the bound")
        bounds = [[bound] * g.n for _ in range(g.n)]
        allowance = 2 * (1 + eps1)
    elif kind == "spanner":
        if stretch is None:
            raise ValueError("spanner verification needs the stretch factor")
        base = all_pairs_shortest_lengths(g)
        bounds = [
            [INF if base[u][v] == INF else stretch * base[u][v] for v in range(g.n)]
            for u in range(g.n)
        ]
        allowance = stretch * (1 + eps1)
    else:
        raise ValueError(f"unknown solution kind {kind!r}")

    sub = all_pairs_shortest_lengths(g, edge_ids)
    worst = 0.0
    settled = 0
    total = 0
    offending: list[tuple[int, int, float]] = []
    for u in range(g.n):
        for v in range(g.n):
            if u == v or bounds[u][v] == INF:
                continue
            total += 1
            ratio = sub[u][v] / bounds[u][v] if sub[u][v] != INF else INF
            worst = max(worst, ratio)
            if sub[u][v] <= bounds[u][v]:
                settled += 1
            if ratio > allowance:
                offending.append((u, v, float(ratio)))
    return {
        "ok": not offending,
        "worst_violation": float(worst),
        "offending": offending,
        "settled_pairs": settled,
        "total_pairs": total,
    }


def _thick_stage(
    g: Digraph,
    roots: list[int],
    out_bounds_of,
    in_bounds_of,
    eps1: Fraction,
    level: int,
    max_bound,
) -> frozenset[int]:
    out_solver = ShallowLightSolver(g, eps1, max_bound=max_bound)
    in_solver = ShallowLightSolver(g.reverse(), eps1, max_bound=max_bound)
    trees = []
    for root in roots:
        ob = out_bounds_of(root)
        ib = in_bounds_of(root)
        if ob:
            trees.append(out_solver.solve(level, root, ob))
        if ib:
            trees.append(in_solver.solve(level, root, ib))
    return union_thick(trees)


def solve_ndbd(
    inst: NdbdInstance,
    eps: float | Fraction,
    level: int = 2,
    seed: int = 0,
    instance_label: str = "<memory>",
) -> tuple[frozenset[int], RunReport]:
    """Bounded-distance network design; returns the edge set and its report."""
    g = inst.graph
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be > 0")
    eps1 = eps / 2

    t0 = time.perf_counter()
    if not check_feasible(inst):
        raise InfeasibleInstance("some pair exceeds the bound in the input graph")
    demands = ndbd_demands(inst)
    frac = solve_fractional(g, demands, float(eps) / 2)
    t_lp = time.perf_counter()
    h1 = round_edges(frac.x, g.n, seed)
    t_round = time.perf_counter()

    roots = sample_roots(g.n, SampleConfig(seed=seed + 1))
    L = inst.bound
    h2 = _thick_stage(
        g,
        roots,
        lambda r: {v: L for v in range(g.n) if v != r},
        lambda r: {v: L for v in range(g.n) if v != r},
        eps1,
        level,
        L,
    )
    t_trees = time.perf_counter()

    edges = frozenset(h1 | h2)
    check = verify_solution(g, edges, "ndbd", bound=L, eps=eps)
    t_verify = time.perf_counter()

    report = RunReport(
        instance=instance_label,
        params={
            "eps": float(eps),
            "level": level,
            "seed": seed,
            "gamma": _gamma(g.n),
            "delta": len(roots),
        },
        edges=sorted(e + 1 for e in edges),
        cost=g.edge_cost(edges),
        max_violation_factor=check["worst_violation"],
        per_stage_timings_ms={
            "lp": (t_lp - t0) * 1000.0,
            "rounding": (t_round - t_lp) * 1000.0,
            "trees": (t_trees - t_round) * 1000.0,
            "verify": (t_verify - t_trees) * 1000.0,
        },
        settled_pairs=check["settled_pairs"],
        total_pairs=check["total_pairs"],
    )
    return edges, report


def solve_spanner(
    inst: SpannerInstance,
    eps: float | Fraction,
    level: int = 2,
    seed: int = 0,
    instance_label: str = "<memory>",
) -> tuple[frozenset[int], RunReport]:
    """Light directed spanner; every reachable pair ends within
    alpha*(1+eps/2) times its bound alpha*d_G(u,v)."""
    g = inst.graph
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be > 0")
    eps1 = eps / 2
    alpha = inst.stretch

    t0 = time.perf_counter()
    base = all_pairs_shortest_lengths(g)
    demands = spanner_demands(inst)
    frac = solve_fractional(g, demands, float(eps) / 2) if demands else None
    t_lp = time.perf_counter()
    h1 = round_edges(frac.x, g.n, seed) if frac else frozenset()
    t_round = time.perf_counter()

    roots = sample_roots(g.n, SampleConfig(seed=seed + 1)) if g.n else []
    finite = [b for row in base for b in row if b != INF]
    max_bound = alpha * max(finite) if finite else 0

    def out_bounds(r: int) -> dict:
        return {
            v: alpha * base[r][v] for v in range(g.n) if v != r and base[r][v] != INF
        }

    def in_bounds(r: int) -> dict:
        return {
            v: alpha * base[v][r] for v in range(g.n) if v != r and base[v][r] != INF
        }

    h2 = _thick_stage(g, roots, out_bounds, in_bounds, eps1, level, max_bound)
    t_trees = time.perf_counter()

    edges = frozenset(h1 | h2)
    check = verify_solution(g, edges, "spanner", stretch=alpha, eps=eps)
    t_verify = time.perf_counter()

    sub = all_pairs_shortest_lengths(g, edges)
    worst_stretch = 0.0
    for u in range(g.n):
        for v in range(g.n):
            if u != v and base[u][v] not in (0, INF):
                worst_stretch = max(worst_stretch, sub[u][v] / base[u][v])

    report = RunReport(
        instance=instance_label,
        params={
            "eps": float(eps),
            "level": level,
            "seed": seed,
            "gamma": _gamma(g.n),
            "delta": len(roots),
        },
        edges=sorted(e + 1 for e in edges),
        cost=g.edge_cost(edges),
        max_violation_factor=check["worst_violation"],
        per_stage_timings_ms={
            "lp": (t_lp - t0) * 1000.0,
            "rounding": (t_round - t_lp) * 1000.0,
            "trees": (t_trees - t_round) * 1000.0,
            "verify": (t_verify - t_trees) * 1000.0,
        },
        settled_pairs=check["settled_pairs"],
        total_pairs=check["total_pairs"],
        extra={"worst_stretch": float(worst_stretch)},
    )
    return edges, report
