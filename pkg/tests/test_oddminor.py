from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graph_of, graphs
from oddminor_forge.errors import PreconditionFailed
from oddminor_forge.graph import (
    Graph,
    complete_graph,
    connected_components,
    cycle_graph,
    is_bipartite,
    path_graph,
    petersen_graph,
    random_graph,
    star_graph,
)
from oddminor_forge.oddminor import (
    BLACK,
    WHITE,
    MinorModel,
    Tree,
    brute_force_odd_clique_minor,
    greedy_clique_model,
    max_odd_clique_minor,
    model_to_pairing,
    odd_minor_k3,
    pairing_size,
    valid_parts,
    verify_model,
)
from oddminor_forge.pairing import Pairing, is_odd_connected_pairing


def singletons(vertices, color=WHITE) -> MinorModel:
    return MinorModel(tuple(Tree((v,), (), (color,)) for v in vertices))


class TestVerify:
    def test_k3_itself(self):
        assert verify_model(complete_graph(3), singletons(range(3))).verdict

    def test_c4_never_hosts_three_singletons(self):
        c4 = cycle_graph(4)
        for placement in itertools.permutations(range(4), 3):
            for cols in itertools.product((WHITE, BLACK), repeat=3):
                model = MinorModel(tuple(Tree((v,), (), (c,)) for v, c in zip(placement, cols)))
                assert not verify_model(c4, model).verdict

    def test_improper_tree_coloring(self):
        tree = Tree((0, 1, 2), ((0, 1), (1, 2)), (WHITE, WHITE, WHITE))
        report = verify_model(path_graph(3), MinorModel((tree,)))
        assert not report.verdict and report.reason

    def test_endpoints_white_middle_black_is_fine(self):
        tree = Tree((0, 1, 2), ((0, 1), (1, 2)), (WHITE, BLACK, WHITE))
        assert verify_model(path_graph(3), MinorModel((tree,))).verdict

    def test_rejects_overlap_non_edge_and_non_tree(self):
        k4 = complete_graph(4)
        overlap = MinorModel((Tree((0,), (), (WHITE,)), Tree((0, 1), ((0, 1),), (WHITE, BLACK))))
        assert not verify_model(k4, overlap).verdict
        non_edge = MinorModel((Tree((0, 1), ((0, 1),), (WHITE, BLACK)),))
        assert not verify_model(Graph.empty(2), non_edge).verdict
        cycle = Tree((0, 1, 2), ((0, 1), (1, 2), (0, 2)), (WHITE, BLACK, WHITE))
        assert not verify_model(k4, MinorModel((cycle,))).verdict

    def test_link_needs_matching_colors(self):
        g = Graph.from_edges(2, [(0, 1)])
        assert verify_model(g, MinorModel((Tree((0,), (), (WHITE,)), Tree((1,), (), (WHITE,))))).verdict
        assert not verify_model(g, MinorModel((Tree((0,), (), (WHITE,)), Tree((1,), (), (BLACK,))))).verdict


class TestSearch:
    @pytest.mark.parametrize(
        "g, t", [(complete_graph(5), 5), (cycle_graph(5), 3), (cycle_graph(4), 2), (Graph.empty(3), 1), (Graph.empty(0), 0)]
    )
    def test_examples(self, g, t):
        res = max_odd_clique_minor(g)
        assert (res.t, res.status) == (t, "exact")
        assert res.witness.t == t
        assert verify_model(g, res.witness).verdict

    @pytest.mark.parametrize("t", range(1, 9))
    def test_complete_graphs(self, t):
        assert max_odd_clique_minor(complete_graph(t)).t == t

    def test_against_frozen(self, frozen_rows):
        for row in frozen_rows:
            g = graph_of(row)
            res = max_odd_clique_minor(g)
            assert res.t == row["t_star"]
            assert verify_model(g, res.witness).verdict
            assert (res.t >= 3) == (not row["bipartite"])
            if g.n <= 6:
                assert brute_force_odd_clique_minor(g) == row["t_star"]

    @settings(max_examples=30)
    @given(graphs(max_n=7))
    def test_bipartite_criterion(self, g):
        t = max_odd_clique_minor(g).t
        assert (t >= 3) == odd_minor_k3(g)
        if is_bipartite(g) and g.edge_count:
            assert t == 2

    @settings(max_examples=25)
    @given(graphs(min_n=2, max_n=7), st.data())
    def test_monotone_under_edge_addition(self, g, data):
        u = data.draw(st.integers(0, g.n - 1))
        v = data.draw(st.integers(0, g.n - 1).filter(lambda x: x != u))
        assert max_odd_clique_minor(g.with_edge(u, v)).t >= max_odd_clique_minor(g).t

    def test_budget_gives_lower_bound(self):
        g = random_graph(16, 0.6, np.random.default_rng(5))
        res = max_odd_clique_minor(g, budget=50)
        assert res.status == "lower-bound"
        assert verify_model(g, res.witness).verdict

    def test_greedy_model_verifies(self):
        for seed in range(5):
            g = random_graph(20, 0.5, np.random.default_rng(seed))
            assert verify_model(g, greedy_clique_model(g)).verdict

    def test_valid_parts_are_bichromatic_connected(self):
        g = cycle_graph(5)
        for group in valid_parts(g):
            for s, w in group:
                verts = [v for v in range(5) if s >> v & 1]
                tree_ok = len(verts) == 1 or len(connected_components(g.induced_subgraph(verts))) == 1
                assert tree_ok
                assert w & ~s == 0


class TestK3:
    def test_examples(self):
        assert odd_minor_k3(cycle_graph(5))
        assert odd_minor_k3(petersen_graph())
        assert not odd_minor_k3(star_graph(4))
        assert not odd_minor_k3(path_graph(6))


class TestModelToPairing:
    def test_singleton_case(self):
        # v_1 is the lowest vertex not already in the pairing
        pairing = model_to_pairing(complete_graph(6), singletons(range(3)), Fraction(1, 6))
        assert pairing == Pairing(((0, 1),))

    def test_two_vertex_trees_case(self):
        trees = [Tree((0, 1), ((0, 1),), (WHITE, BLACK))] + [Tree((v,), (), (WHITE,)) for v in range(2, 6)]
        pairing = model_to_pairing(complete_graph(6), MinorModel(tuple(trees)), Fraction(1, 6))
        assert pairing == Pairing(((0, 1),))

    def test_four_vertex_example_fails_the_size_precondition(self):
        # two edge-trees on C4-with-diagonal: t = 2 < (1/3 + 1/4) 4
        g = Graph.from_edges(4, [(0, 1), (2, 3), (0, 2), (1, 3)])
        model = MinorModel((Tree((0, 1), ((0, 1),), (WHITE, BLACK)), Tree((2, 3), ((2, 3),), (WHITE, BLACK))))
        assert verify_model(g, model).verdict
        with pytest.raises(PreconditionFailed):
            model_to_pairing(g, model, Fraction(1, 4))

    def test_invalid_model(self):
        with pytest.raises(PreconditionFailed):
            model_to_pairing(cycle_graph(6), singletons(range(3)), Fraction(1, 12))

    def test_eta_range(self):
        with pytest.raises(PreconditionFailed):
            model_to_pairing(complete_graph(6), singletons(range(6)), 1)

    def test_single_vertex_host_has_no_room(self):
        with pytest.raises(PreconditionFailed):
            model_to_pairing(complete_graph(1), singletons([0]), Fraction(1, 6))

    def test_large_trees_never_meet_the_size_bound(self):
        # trees of >= 3 vertices give t <= n/3 < (1/3 + eta) n
        g = complete_graph(12)
        trees = tuple(
            Tree((3 * i, 3 * i + 1, 3 * i + 2), ((3 * i, 3 * i + 1), (3 * i + 1, 3 * i + 2)), (WHITE, BLACK, WHITE))
            for i in range(4)
        )
        with pytest.raises(PreconditionFailed):
            model_to_pairing(g, MinorModel(trees), Fraction(1, 12))

    @given(st.integers(0, 40), st.integers(0, 20), st.integers(0, 13), st.sampled_from([Fraction(1, 12), Fraction(1, 6), Fraction(1, 3)]))
    def test_counting_leaves_a_case(self, a, b, c, eta):
        # a singletons, b two-vertex trees, c larger trees
        n = a + 2 * b + 3 * c
        if n and a + b + c >= (Fraction(1, 3) + eta) * n:
            s = pairing_size(n, eta)
            assert a >= s or b >= s

    def test_size(self):
        assert pairing_size(12, Fraction(1, 6)) == 1
        assert pairing_size(13, Fraction(1, 6)) == 2

    @pytest.mark.parametrize("eta", [Fraction(1, 12), Fraction(1, 6)])
    def test_from_search_witnesses(self, frozen_rows, eta):
        used = 0
        for row in frozen_rows:
            g = graph_of(row)
            res = max_odd_clique_minor(g)
            if g.n < 2 or res.t < (Fraction(1, 3) + eta) * g.n:
                continue
            pairing = model_to_pairing(g, res.witness, eta)
            used += 1
            assert pairing.size == pairing_size(g.n, eta)
            assert is_odd_connected_pairing(g, pairing)
        assert used > 20
