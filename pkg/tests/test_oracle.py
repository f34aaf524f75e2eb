import random
from fractions import Fraction

import pytest

from slnet.errors import CapExceeded, Infeasible
from slnet.graphs import Digraph, is_out_arborescence
from slnet.instances import NdbdInstance, SlstInstance, SpannerInstance
from slnet.oracle import exact_dslst, exact_ndbd, exact_spanner
from slnet.pipelines import verify_solution

from conftest import brute_cheapest_subgraph, brute_dslst, floyd_distances, random_graph


class TestDslst:
    def test_diamond(self, diamond):
        inst = SlstInstance(diamond, 0, frozenset({3}), {3: 4})
        tree = exact_dslst(inst, 1)
        assert tree.cost(diamond) == 20
        assert tree.distances == {3: 2}

    def test_stem(self, stem):
        inst = SlstInstance(stem, 0, frozenset({2, 3}), {2: 2, 3: 2})
        tree = exact_dslst(inst, 2)
        assert tree.cost(stem) == 11
        assert is_out_arborescence(stem, tree.edges, 0)

    def test_root_as_terminal_empty_tree(self):
        g = Digraph(2, [(0, 1, 5, 3)])
        inst = SlstInstance(g, 0, frozenset({0}), {0: 0})
        tree = exact_dslst(inst, 1)
        assert tree.edges == frozenset() and tree.cost(g) == 0

    def test_infeasible(self, diamond):
        inst = SlstInstance(diamond, 0, frozenset({3}), {3: 1})
        with pytest.raises(Infeasible):
            exact_dslst(inst, 1)

    def test_cap(self):
        g = Digraph(3, [(0, 1, 1, 1)] * 21)
        with pytest.raises(CapExceeded):
            exact_dslst(SlstInstance(g, 0, frozenset({1}), {1: 1}), 1)

    @pytest.mark.parametrize("seed", range(12))
    def test_matches_powerset(self, seed):
        rng = random.Random(seed)
        g = random_graph(rng, rng.randint(2, 5), rng.randint(2, 9), max_length=5)
        root = rng.randrange(g.n)
        terms = [v for v in range(g.n) if v != root]
        bounds = {t: rng.randint(0, 12) for t in terms}
        k = rng.randint(1, len(terms))
        expect = brute_dslst(g, root, bounds, k)
        inst = SlstInstance(g, root, frozenset(terms), bounds)
        if expect is None:
            with pytest.raises(Infeasible):
                exact_dslst(inst, k)
        else:
            tree = exact_dslst(inst, k)
            assert tree.cost(g) == expect
            assert len(tree.distances) >= k


class TestNdbd:
    def test_two_cycle(self, two_cycle):
        assert exact_ndbd(NdbdInstance(two_cycle, 1)) == frozenset({0, 1})

    def test_bidirected_triangle(self):
        g = Digraph(3, [(0, 1, 1, 1), (1, 0, 1, 1), (0, 2, 1, 1),
                        (2, 0, 1, 1), (1, 2, 1, 1), (2, 1, 1, 1)])
        assert exact_ndbd(NdbdInstance(g, 1)) == frozenset(range(6))

    def test_redundant_expensive_edge_dropped(self):
        # 4 edges: a 2-cycle plus two expensive parallels; optimum keeps the cheap pair
        g = Digraph(2, [(0, 1, 3, 1), (1, 0, 4, 1), (0, 1, 100, 1), (1, 0, 50, 1)])
        opt = exact_ndbd(NdbdInstance(g, 1))
        assert opt == frozenset({0, 1})
        assert g.edge_cost(opt) == 7 < g.edge_cost(range(4))

    def test_infeasible(self, two_cycle):
        with pytest.raises(Infeasible):
            exact_ndbd(NdbdInstance(two_cycle, 0))

    def test_cap(self):
        g = Digraph(2, [(0, 1, 1, 1)] * 17)
        with pytest.raises(CapExceeded):
            exact_ndbd(NdbdInstance(g, 1))

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_powerset(self, seed):
        rng = random.Random(100 + seed)
        g = random_graph(rng, rng.randint(2, 4), rng.randint(2, 8), max_length=4)
        bound = rng.randint(1, 10)
        bounds = [[bound] * g.n for _ in range(g.n)]
        expect = brute_cheapest_subgraph(g, bounds)
        inst = NdbdInstance(g, bound)
        if expect is None:
            with pytest.raises(Infeasible):
                exact_ndbd(inst)
        else:
            got = exact_ndbd(inst)
            assert g.edge_cost(got) == expect[0]

    def test_cross_check_with_verifier(self, two_cycle):
        # spec invariant: the oracle optimum equals the min over subsets that verify
        import itertools

        best = None
        for r in range(3):
            for combo in itertools.combinations(range(2), r):
                res = verify_solution(two_cycle, frozenset(combo), "ndbd", bound=1, eps=0)
                if res["worst_violation"] <= 1.0:
                    cost = two_cycle.edge_cost(combo)
                    best = cost if best is None else min(best, cost)
        assert best == two_cycle.edge_cost(exact_ndbd(NdbdInstance(two_cycle, 1)))


class TestSpanner:
    def test_cycle_alpha_one(self):
        g = Digraph(3, [(0, 1, 2, 1), (1, 2, 2, 1), (2, 0, 2, 1)])
        assert exact_spanner(SpannerInstance(g, Fraction(1))) == frozenset(range(3))

    def test_g1_alpha3_keeps_direct_edge(self, g1):
        # pair (1,3) has bound 3 but the detour is length 4
        opt = exact_spanner(SpannerInstance(g1, Fraction(3)))
        assert 2 in opt
        assert opt == frozenset({0, 1, 2})

    def test_huge_alpha_min_reachability_subgraph(self, g1):
        opt = exact_spanner(SpannerInstance(g1, Fraction(10**6)))
        # reachability needs both cheap edges; the expensive shortcut drops
        assert opt == frozenset({0, 1})

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_powerset(self, seed):
        rng = random.Random(200 + seed)
        g = random_graph(rng, rng.randint(2, 4), rng.randint(1, 7), max_length=4)
        alpha = Fraction(rng.choice([1, 3, 2]), rng.choice([1, 2]))
        if alpha < 1:
            alpha = 1 / alpha
        base = floyd_distances(g)
        bounds = [[alpha * base[u][v] for v in range(g.n)] for u in range(g.n)]
        expect = brute_cheapest_subgraph(g, bounds)
        got = exact_spanner(SpannerInstance(g, alpha))
        assert g.edge_cost(got) == expect[0]
