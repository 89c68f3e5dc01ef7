"""
Unit tests for light-edge matching, contraction and the level hierarchy.
"""

import networkx as nx
import numpy as np
import pytest

from mlskel.domain.coarsening import build_hierarchy, coarsen_level, contract, light_edge_matching
from mlskel.domain.exceptions import ContractViolation
from mlskel.domain.graph import EmbeddedGraph, connected_components
from tests.graphs import complete_graph, cycle_graph, disjoint_union, path_graph, star_graph, to_networkx


def _quotient_edges(graph: EmbeddedGraph, parent: np.ndarray) -> set[tuple[int, int]]:
    out = set()
    for u, v in graph.edges().tolist():
        a, b = int(parent[u]), int(parent[v])
        if a != b:
            out.add((min(a, b), max(a, b)))
    return out


class TestLightEdgeMatching:

    def setup_method(self):
        self.rng = np.random.default_rng(0)

    def test_edgeless_graph(self):
        g = EmbeddedGraph.from_edges(np.zeros((3, 3)), [])
        assert light_edge_matching(g, self.rng) == []

    def test_single_edge(self):
        pairs = light_edge_matching(path_graph(2), self.rng)
        assert sorted(pairs[0]) == [0, 1]
        assert len(pairs) == 1

    def test_prefers_nearer_neighbour(self):
        g = EmbeddedGraph.from_edges([(0, 0, 0), (1, 0, 0), (3, 0, 0)], [(0, 1), (1, 2)])
        assert light_edge_matching(g, self.rng, order=[1, 0, 2]) == [(1, 0)]

    def test_tie_goes_to_smaller_id(self):
        g = EmbeddedGraph.from_edges([(0, 0, 0), (-1, 0, 0), (1, 0, 0)], [(0, 1), (0, 2)])
        assert light_edge_matching(g, self.rng, order=[0, 1, 2]) == [(0, 1)]

    @pytest.mark.parametrize("seed", range(5))
    def test_matching_is_maximal(self, seed):
        g = complete_graph(7) if seed == 0 else cycle_graph(11 + seed)
        pairs = light_edge_matching(g, np.random.default_rng(seed))
        matched = {v for pair in pairs for v in pair}
        assert len(matched) == 2 * len(pairs)
        for u, v in g.edges().tolist():
            assert u in matched or v in matched


class TestContract:

    def test_triangle(self):
        coarse, record = contract(complete_graph(3), [(0, 1)])
        assert (coarse.num_vertices, coarse.num_edges) == (2, 1)
        assert record.parent.tolist() == [0, 0, 1]
        assert record.children == ((0, 1), (2,))

    def test_single_edge_sums_capacity(self):
        g = EmbeddedGraph.from_edges([(0, 0, 0), (2, 0, 0)], [(0, 1)], capacities=[1, 3])
        coarse, _ = contract(g, [(1, 0)])
        assert coarse.num_vertices == 1
        assert coarse.num_edges == 0
        assert coarse.capacities.tolist() == [4]
        assert coarse.positions[0].tolist() == [1.5, 0.0, 0.0]

    def test_two_disjoint_edges(self):
        g = disjoint_union(path_graph(2), path_graph(2))
        coarse, _ = contract(g, [(0, 1), (2, 3)])
        assert (coarse.num_vertices, coarse.num_edges) == (2, 0)
        assert connected_components(coarse)[0] == 2

    def test_non_edge_rejected(self):
        with pytest.raises(ContractViolation):
            contract(path_graph(3), [(0, 2)])

    def test_overlapping_pairs_rejected(self):
        with pytest.raises(ContractViolation) as exc_info:
            contract(path_graph(3), [(0, 1), (1, 2)])
        assert "vertex-disjoint" in exc_info.value.message


class TestCoarsenLevel:

    def test_path_is_halved(self):
        coarse, record = coarsen_level(path_graph(8), np.random.default_rng(1))
        assert coarse.num_vertices <= 4
        assert record.halved is True
        assert connected_components(coarse)[0] == 1

    def test_star_contracts_one_pair_per_round(self):
        coarse, record = coarsen_level(star_graph(99), np.random.default_rng(2), max_rounds=10)
        assert record.rounds == 10
        assert coarse.num_vertices == 90
        assert record.halved is False
        assert record.stalled is False

    def test_isolated_vertices_stall(self):
        g = EmbeddedGraph.from_edges([(0, 0, 0), (1, 0, 0)], [])
        coarse, record = coarsen_level(g, np.random.default_rng(0))
        assert record.stalled is True
        assert coarse.num_vertices == 2

    def test_composed_record_is_a_minor_witness(self):
        g = cycle_graph(40)
        coarse, record = coarsen_level(g, np.random.default_rng(3))
        assert record.num_fine == 40
        assert _quotient_edges(g, record.parent) == {tuple(e) for e in coarse.edges().tolist()}
        assert coarse.total_capacity == 40
        for w, kids in enumerate(record.children):
            assert kids
            assert nx.is_connected(to_networkx(g).subgraph(kids))
            assert np.allclose(coarse.positions[w], g.barycenter(kids))

    def test_single_vertex_rejected(self):
        with pytest.raises(ContractViolation):
            coarsen_level(path_graph(1), np.random.default_rng(0))


class TestBuildHierarchy:

    def test_small_graph_is_one_level(self):
        hierarchy = build_hierarchy(cycle_graph(10), alpha=64)
        assert hierarchy.num_levels == 1
        assert hierarchy.records == ()

    def test_long_path(self):
        hierarchy = build_hierarchy(path_graph(1000), alpha=64, rng=np.random.default_rng(4))
        assert hierarchy.graphs[-1].num_vertices <= 64
        assert len(hierarchy.records) <= 5
        for g in hierarchy.graphs:
            assert connected_components(g)[0] == 1

    def test_two_cycles_keep_two_components(self):
        g = disjoint_union(cycle_graph(50), cycle_graph(50, center=(5.0, 0.0, 0.0)))
        hierarchy = build_hierarchy(g, alpha=8, rng=np.random.default_rng(5))
        assert hierarchy.num_levels > 1
        for level in hierarchy.graphs:
            assert connected_components(level)[0] == 2

    def test_isolated_vertices_truncate(self):
        g = EmbeddedGraph.from_edges([(0, 0, 0), (1, 0, 0)], [])
        hierarchy = build_hierarchy(g, alpha=1)
        assert hierarchy.num_levels == 1
        assert hierarchy.stalled is True

    def test_capacity_is_conserved(self, torus_graph):
        hierarchy = build_hierarchy(torus_graph, alpha=8, rng=np.random.default_rng(6))
        for g in hierarchy.graphs:
            assert g.total_capacity == torus_graph.num_vertices

    def test_every_record_is_a_minor_witness(self, torus_graph):
        hierarchy = build_hierarchy(torus_graph, alpha=16, rng=np.random.default_rng(7))
        for i, record in enumerate(hierarchy.records):
            fine, coarse = hierarchy.graphs[i], hierarchy.graphs[i + 1]
            assert record.fine_level == i
            assert record.coarse_level == i + 1
            assert record.num_coarse == coarse.num_vertices
            assert _quotient_edges(fine, record.parent) == {tuple(e) for e in coarse.edges().tolist()}

    def test_triangle_mesh_halves_without_stalls(self, torus_graph):
        hierarchy = build_hierarchy(torus_graph, alpha=16, rng=np.random.default_rng(8))
        assert hierarchy.stalled is False
        for record in hierarchy.records:
            assert record.halved is True

    def test_same_seed_same_hierarchy(self, torus_graph):
        a = build_hierarchy(torus_graph, alpha=16, rng=np.random.default_rng(9))
        b = build_hierarchy(torus_graph, alpha=16, rng=np.random.default_rng(9))
        assert [g.num_vertices for g in a.graphs] == [g.num_vertices for g in b.graphs]
        for ra, rb in zip(a.records, b.records):
            assert np.array_equal(ra.parent, rb.parent)

    def test_alpha_below_one_rejected(self):
        with pytest.raises(ContractViolation):
            build_hierarchy(path_graph(4), alpha=0)
