import math
import random
from fractions import Fraction

import pytest

from slnet.errors import Infeasible
from slnet.graphs import Digraph, INF, is_out_arborescence, tree_distances
from slnet.instances import SlstInstance
from slnet.oracle import exact_dslst
from slnet.slst import (
    ShallowLightSolver,
    SlstParams,
    best_subtree,
    level_one,
    ratio_bound,
    shallow_light,
)

from conftest import random_graph


class TestRatioBound:
    def test_values(self):
        assert ratio_bound(2, 4) == pytest.approx(11.3137085, abs=1e-6)
        assert ratio_bound(2, 1) == pytest.approx(5.6568542, abs=1e-6)

    def test_decreasing_in_level_for_large_k(self):
        assert ratio_bound(3, 10**6) < ratio_bound(2, 10**6)

    def test_rejects_level_one(self):
        with pytest.raises(ValueError):
            ratio_bound(1, 5)


class TestExamples:
    def test_diamond_tight(self, diamond):
        tree = shallow_light(diamond, 2, 0, {3}, {3: 4}, 1, Fraction(1, 10))
        assert tree.cost(diamond) == 20
        assert tree.distances[3] == 2

    def test_diamond_loose(self, diamond):
        tree = shallow_light(diamond, 2, 0, {3}, {3: 10}, 1, Fraction(1, 10))
        assert tree.cost(diamond) == 2
        assert tree.distances[3] == 10

    def test_stem_level2_beats_level1(self, stem):
        bounds = {2: 2, 3: 2}
        t2 = shallow_light(stem, 2, 0, {2, 3}, bounds, 2, Fraction(1, 4))
        t1 = level_one(stem, 0, {2, 3}, bounds, 2, Fraction(1, 4))
        assert t2.cost(stem) == 11
        assert t1.cost(stem) == 12

    def test_infeasible_when_no_terminal_in_reach(self, diamond):
        with pytest.raises(Infeasible):
            shallow_light(diamond, 2, 0, {3}, {3: 1}, 1, Fraction(1, 4))

    def test_single_edge_level_one(self):
        g = Digraph(2, [(0, 1, 5, 3)])
        tree = level_one(g, 0, {1}, {1: 3}, 1)
        assert tree.edges == frozenset({0}) and tree.cost(g) == 5

    def test_level_one_shares_prefix(self):
        # r->a (c5), a->t1 (c1), a->t2 (c1): union cost 7 < 5+1 + 5+1
        g = Digraph(4, [(0, 1, 5, 1), (1, 2, 1, 1), (1, 3, 1, 1)])
        tree = level_one(g, 0, {2, 3}, {2: 2, 3: 2}, 2)
        assert tree.cost(g) == 7
        assert is_out_arborescence(g, tree.edges, 0)


class TestBestSubtree:
    def test_stem_first_step(self, stem):
        part = best_subtree(stem, 2, 0, {2, 3}, {2: 2, 3: 2}, 2, Fraction(1, 4))
        assert part.rho == Fraction(11, 2)
        assert part.covered.keys() == {2, 3}

    def test_empty_when_all_infeasible(self, diamond):
        part = best_subtree(diamond, 2, 0, {3}, {3: 0}, 1, Fraction(1, 4))
        assert part.empty and part.rho == INF

    def test_single_terminal_rho_is_path_cost(self, g1):
        part = best_subtree(g1, 2, 0, {2}, {2: 1}, 1, Fraction(1, 4))
        assert part.rho == Fraction(5, 1)


class TestGuarantees:
    @pytest.mark.parametrize("seed", range(15))
    def test_output_is_arborescence_within_slack(self, seed):
        rng = random.Random(seed)
        g = random_graph(rng, rng.randint(3, 8), rng.randint(4, 14), max_length=6)
        root = rng.randrange(g.n)
        eps1 = Fraction(rng.choice([1, 1, 4]), 4)
        terms = [v for v in range(g.n) if v != root]
        rng.shuffle(terms)
        terms = terms[: rng.randint(1, min(4, len(terms)))]
        bounds = {t: rng.randint(0, 15) for t in terms}
        try:
            tree = shallow_light(g, 2, root, terms, bounds, eps1=eps1)
        except Infeasible:
            from slnet.graphs import shortest_lengths_from

            dist = shortest_lengths_from(g, root)
            assert sum(1 for t in terms if dist[t] <= bounds[t]) < len(terms)
            return
        assert is_out_arborescence(g, tree.edges, root)
        dist = tree_distances(g, tree.edges, root)
        assert len(tree.distances) >= len(terms)
        for t in terms:
            assert dist[t] <= (1 + eps1) * bounds[t]
            assert tree.distances[t] == dist[t]

    @pytest.mark.parametrize("seed", range(10))
    def test_ratio_against_oracle(self, seed):
        rng = random.Random(400 + seed)
        n = rng.randint(3, 6)
        g = random_graph(rng, n, rng.randint(n, 10), max_length=5)
        root = rng.randrange(n)
        terms = [v for v in range(n) if v != root][: rng.randint(1, 3)]
        bounds = {t: rng.randint(1, 14) for t in terms}
        inst = SlstInstance(g, root, frozenset(terms), bounds)
        try:
            opt = exact_dslst(inst, len(terms))
        except Infeasible:
            return
        tree = shallow_light(g, 2, root, terms, bounds, eps1=Fraction(1, 4))
        assert tree.cost(g) <= ratio_bound(2, len(terms)) * opt.cost(g)

    def test_partial_coverage_k_subset(self, stem):
        # k=1 picks the single cheapest terminal connection
        tree = shallow_light(stem, 2, 0, {2, 3}, {2: 2, 3: 2}, 1, Fraction(1, 4))
        assert tree.cost(stem) == 6
        assert len(tree.distances) >= 1

    def test_level3_matches_level2_on_small(self, stem):
        bounds = {2: 2, 3: 2}
        t3 = shallow_light(stem, 3, 0, {2, 3}, bounds, 2, Fraction(1, 4))
        assert t3.cost(stem) <= 11
        assert is_out_arborescence(stem, t3.edges, 0)

    def test_determinism(self):
        from slnet.gen import generate_instance
        from slnet.graphs import shortest_lengths_from

        inst = generate_instance("ndbd", 7, 13, seed=77, max_length=5)
        g = inst.graph
        dist = shortest_lengths_from(g, 0)
        bounds = {t: dist[t] + 2 for t in range(1, 6)}
        a = shallow_light(g, 2, 0, bounds, bounds, eps1=Fraction(1, 4))
        b = shallow_light(g, 2, 0, bounds, bounds, eps1=Fraction(1, 4))
        assert a == b


class TestSolverSharing:
    def test_shared_solver_matches_fresh(self, stem):
        solver = ShallowLightSolver(stem, Fraction(1, 4), max_bound=2)
        t_shared = solver.solve(2, 0, {2: 2, 3: 2})
        t_fresh = shallow_light(stem, 2, 0, {2, 3}, {2: 2, 3: 2})
        assert t_shared == t_fresh

    def test_pruning_flags_solver(self, stem):
        params = SlstParams(max_kprime=1, max_rungs=2)
        solver = ShallowLightSolver(
            stem, Fraction(1, 4), max_kprime=params.max_kprime, max_rungs=params.max_rungs
        )
        assert solver.pruned
        tree = solver.solve(2, 0, {2: 2, 3: 2})
        assert is_out_arborescence(stem, tree.edges, 0)

    def test_fallback_provider_agrees_on_small(self, stem):
        # force the per-query fallback by shrinking the cell cap
        lo = ShallowLightSolver(stem, Fraction(1, 4), cell_cap=4)
        tree = lo.solve(2, 0, {2: 2, 3: 2})
        assert not lo._use_tables
        assert tree.cost(stem) == 11

    def test_zero_length_edges(self):
        g = Digraph(3, [(0, 1, 2, 0), (1, 2, 3, 0), (0, 2, 99, 0)])
        tree = shallow_light(g, 2, 0, {2}, {2: 0}, 1, Fraction(1, 4))
        assert tree.cost(g) == 5
        assert tree.distances[2] == 0
