from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graph_of, graphs
from oddminor_forge.graph import (
    Graph,
    brute_force_alpha_at_most_two,
    brute_force_chromatic_number,
    brute_force_matching_number,
    chromatic_number,
    complement,
    complete_graph,
    connected_components,
    cycle_graph,
    graph_from_bitmask,
    greedy_matching,
    independence_at_most_two,
    is_bipartite,
    is_triangle_free,
    leaf_reduced_matching_number,
    list_triangles,
    matching_number,
    max_degree,
    max_matching,
    odd_cycle,
    optimal_coloring,
    perfect_matching_graph,
    petersen_graph,
    random_graph,
    star_graph,
    unpack_rows,
)


class TestComplement:
    def test_k4_gives_empty(self):
        assert complement(complete_graph(4)) == Graph.empty(4)

    def test_zero_vertices(self):
        assert complement(Graph.empty(0)) == Graph.empty(0)

    def test_c5_self_complementary(self):
        c5 = cycle_graph(5)
        pentagram = Graph.from_edges(5, [(i, (i + 2) % 5) for i in range(5)])
        assert complement(c5) == pentagram
        # isomorphic to C5 via i -> 2i mod 5
        relabel = Graph.from_edges(5, [(2 * u % 5, 2 * v % 5) for u, v in c5.edges()])
        assert relabel == pentagram

    @given(graphs(max_n=70))
    def test_involution_and_triangles(self, g):
        cc = complement(complement(g))
        assert cc == g
        assert list_triangles(cc) == list_triangles(g)

    @given(graphs(max_n=70))
    def test_partition_of_pairs(self, g):
        h = complement(g)
        assert g.edge_count + h.edge_count == g.n * (g.n - 1) // 2
        assert not np.any(g.rows & h.rows)

    def test_padding_bits_stay_clear(self):
        h = complement(Graph.empty(65))
        assert int(h.rows[0, 1]) == 1  # only bit 64 set in the second word


class TestTriangles:
    def test_k4(self):
        assert len(list_triangles(complete_graph(4))) == 4

    def test_c6(self):
        assert list_triangles(cycle_graph(6)) == set()

    def test_petersen(self):
        assert list_triangles(petersen_graph()) == set()
        assert is_triangle_free(petersen_graph())

    def test_against_frozen_counts(self, frozen_rows):
        for row in frozen_rows:
            assert len(list_triangles(graph_of(row))) == row["triangles"]


class TestIndependence:
    @pytest.mark.parametrize(
        "g, expected",
        [(cycle_graph(5), True), (cycle_graph(6), False), (Graph.empty(1), True), (Graph.empty(0), True)],
    )
    def test_examples(self, g, expected):
        assert independence_at_most_two(g) is expected

    @given(graphs(max_n=12))
    def test_matches_oracle(self, g):
        assert independence_at_most_two(g) == brute_force_alpha_at_most_two(g)

    def test_against_frozen(self, frozen_rows):
        for row in frozen_rows:
            assert independence_at_most_two(graph_of(row)) == row["alpha_at_most_two"]


class TestChromatic:
    def test_examples(self):
        assert chromatic_number(cycle_graph(5)) == 3
        assert chromatic_number(petersen_graph()) == 3
        assert chromatic_number(complete_graph(7)) == 7
        assert chromatic_number(Graph.empty(0)) == 0
        assert chromatic_number(Graph.empty(4)) == 1

    @given(graphs(max_n=8))
    def test_matches_oracle(self, g):
        assert chromatic_number(g) == brute_force_chromatic_number(g)

    def test_against_frozen(self, frozen):
        rows = frozen["classes"] + frozen["random"] + list(frozen["named"].values())
        for row in rows:
            assert chromatic_number(graph_of(row)) == row["chi"]

    @given(graphs(max_n=10))
    def test_coloring_is_proper(self, g):
        col = optimal_coloring(g)
        assert all(col[u] != col[v] for u, v in g.edges())
        assert len(set(col)) == chromatic_number(g)

    def test_deterministic_witness(self):
        g = petersen_graph()
        assert optimal_coloring(g) == optimal_coloring(g)


class TestMatching:
    def test_examples(self):
        assert len(max_matching(cycle_graph(5))) == 2
        assert len(max_matching(perfect_matching_graph(10))) == 5
        assert len(max_matching(petersen_graph())) == 5
        assert len(max_matching(Graph.empty(0))) == 0

    @given(graphs(max_n=12))
    def test_matches_oracle(self, g):
        m = max_matching(g)
        assert m.is_valid_in(g)
        assert len(m) == brute_force_matching_number(g)

    @given(graphs(max_n=12))
    def test_maximal(self, g):
        m = max_matching(g)
        covered = {x for e in m.edges for x in e}
        assert all(u in covered or v in covered for u, v in g.edges())

    def test_against_frozen(self, frozen):
        for row in frozen["classes"] + frozen["random"] + list(frozen["named"].values()):
            assert len(max_matching(graph_of(row))) == row["nu"]

    @given(graphs(max_n=14))
    def test_leaf_reduction_agrees(self, g):
        adj = g.adjacency
        assert leaf_reduced_matching_number(g.n, adj) == matching_number(g.n, adj)

    @given(graphs(max_n=12))
    def test_greedy_is_lower_bound(self, g):
        gm = greedy_matching(g)
        assert gm.is_valid_in(g)
        assert len(gm) <= len(max_matching(g))


class TestDegreeAndStructure:
    def test_max_degree(self):
        assert max_degree(star_graph(5)) == 5
        assert max_degree(Graph.empty(3)) == 0
        assert max_degree(cycle_graph(5)) == 2
        assert max_degree(Graph.empty(0)) == 0

    @given(graphs(max_n=10))
    def test_bipartite_and_odd_cycle(self, g):
        cyc = odd_cycle(g)
        assert is_bipartite(g) == (cyc is None)
        if cyc is not None:
            assert len(cyc) % 2 == 1
            assert all(g.has_edge(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc)))

    @given(graphs(max_n=10))
    def test_components_partition(self, g):
        comps = connected_components(g)
        assert sorted(v for c in comps for v in c) == list(range(g.n))
        for c in comps:
            rest = set(range(g.n)) - set(c)
            assert not any(g.has_edge(u, v) for u in c for v in rest)

    def test_bitmask_order(self):
        # bit k is the k-th pair in combinations order
        pairs = list(itertools.combinations(range(4), 2))
        for k, pair in enumerate(pairs):
            assert graph_from_bitmask(4, 1 << k).edges() == [pair]


class TestGraphValue:
    @given(graphs(max_n=80))
    def test_rows_symmetric(self, g):
        mat = unpack_rows(g.rows, g.n)
        assert np.array_equal(mat, mat.T)
        assert not mat.diagonal().any()

    def test_edit_operations(self):
        g = cycle_graph(5)
        assert g.with_edge(0, 2).edge_count == 6
        assert g.without_edge(0, 1).edge_count == 4
        assert g.without_vertex(0) == Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        assert g.induced_subgraph([0, 1, 2]).edges() == [(0, 1), (1, 2)]
        assert g.without_edge(0, 1).is_subgraph_of(g)

    @given(st.integers(0, 200), st.floats(0, 1), st.integers(0, 2**32))
    def test_random_graph_roundtrip_matrix(self, n, p, seed):
        g = random_graph(n, p, np.random.default_rng(seed))
        assert Graph.from_matrix(g.to_matrix()) == g

    def test_bad_input_rejected(self):
        with pytest.raises(ValueError):
            Graph.from_edges(3, [(0, 0)])
        with pytest.raises(ValueError):
            Graph.from_edges(3, [(0, 3)])
