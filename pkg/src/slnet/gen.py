"""Seeded random instance generation.

Every instance embeds a random Hamiltonian cycle first, which makes the graph
strongly connected; remaining edges are uniform random non-loops.  Costs and
lengths are uniform in [1, max].  For the bounded-distance problem the bound
defaults to the backbone's total length, which guarantees feasibility; a
caller-supplied bound below that is rejected.  Terminal bounds for tree
instances are ceil(slack * shortest length), slack >= 1, so those are always
feasible too.  All draws come from one seeded generator in a fixed order, so
equal parameters give byte-identical files.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction

from .errors import UnsatisfiableParams
from .graphs import Digraph, shortest_lengths_from
from .instances import Instance, NdbdInstance, SlstInstance, SpannerInstance


def generate_instance(
    kind: str,
    n: int,
    m: int,
    seed: int,
    max_cost: int = 50,
    max_length: int = 10,
    bound: int | None = None,
    alpha: Fraction | None = None,
    terminals: int | None = None,
    slack: Fraction = Fraction(3, 2),
) -> Instance:
    if kind not in ("ndbd", "slst", "spanner"):
        raise UnsatisfiableParams(f"unknown instance kind {kind!r}")
    if n < 2:
        raise UnsatisfiableParams("need at least 2 nodes")
    if m < n:
        raise UnsatisfiableParams("need m >= n edges for the cycle backbone")
    if max_cost < 1 or max_length < 1:
        raise UnsatisfiableParams("max_cost and max_length must be >= 1")

    rng = random.Random(seed)
    perm = list(range(n))
    rng.shuffle(perm)
    edges: list[tuple[int, int, int, int]] = []
    backbone_length = 0
    for i in range(n):
        tail, head = perm[i], perm[(i + 1) % n]
        cost = rng.randint(1, max_cost)
        length = rng.randint(1, max_length)
        backbone_length += length
        edges.append((tail, head, cost, length))
    for _ in range(m - n):
        tail = rng.randrange(n)
        head = rng.randrange(n - 1)
        if head >= tail:
            head += 1
        edges.append((tail, head, rng.randint(1, max_cost), rng.randint(1, max_length)))
    g = Digraph(n, edges)

    if kind == "ndbd":
        if bound is None:
            bound = backbone_length
        elif bound < backbone_length:
            raise UnsatisfiableParams(
                f"bound {bound} is below the backbone length {backbone_length}"
            )
        return NdbdInstance(g, bound)

    if kind == "slst":
        if slack < 1:
            raise UnsatisfiableParams("terminal bound slack must be >= 1")
        count = terminals if terminals is not None else min(3, n - 1)
        if not (1 <= count <= n - 1):
            raise UnsatisfiableParams(f"terminal count must be in 1..{n - 1}")
        root = rng.randrange(n)
        others = [v for v in range(n) if v != root]
        terms = sorted(rng.sample(others, count))
        dist = shortest_lengths_from(g, root)
        bounds = {t: math.ceil(slack * dist[t]) for t in terms}
        return SlstInstance(g, root, frozenset(terms), bounds)

    if alpha is None:
        alpha = Fraction(2)
    if alpha < 1:
        raise UnsatisfiableParams("stretch factor must be >= 1")
    return SpannerInstance(g, Fraction(alpha))
