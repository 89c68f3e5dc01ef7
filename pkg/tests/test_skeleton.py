"""
Unit tests for skeleton extraction, skeleton metrics and Hausdorff distance.
"""

import numpy as np
import pytest

from mlskel.domain.exceptions import ContractViolation, EmptyInputError
from mlskel.domain.graph import EmbeddedGraph
from mlskel.domain.separators import Separator
from mlskel.domain.skeleton import (
    Skeleton,
    directed_hausdorff,
    extract_skeleton,
    sample_skeleton,
    skeleton_metrics,
)
from tests.graphs import cycle_graph, disjoint_union, path_graph, star_graph


def _skeleton(nodes, edges) -> Skeleton:
    return Skeleton.from_graph(EmbeddedGraph.from_edges(nodes, np.asarray(edges, dtype=np.int64).reshape(-1, 2)))


class TestExtractSkeleton:

    def test_no_separators_gives_single_node(self):
        g = path_graph(5)
        skel = extract_skeleton(g, [])
        assert skel.num_nodes == 1
        assert skel.num_edges == 0
        assert skel.positions[0].tolist() == [2.0, 0.0, 0.0]
        assert skel.provenance[0].kind == "residual"
        assert skel.provenance[0].size == 5

    def test_path_split_in_the_middle(self):
        skel = extract_skeleton(path_graph(9), [[4]])
        assert skel.num_nodes == 3
        assert skel.edges().tolist() == [[0, 1], [0, 2]]
        assert skel.positions[0].tolist() == [4.0, 0.0, 0.0]
        assert skel.positions[1].tolist() == [1.5, 0.0, 0.0]
        assert skel.positions[2].tolist() == [6.5, 0.0, 0.0]
        assert [p.kind for p in skel.provenance] == ["separator", "residual", "residual"]

    def test_cycle_with_two_cuts(self):
        g = cycle_graph(12)
        skel = extract_skeleton(g, [Separator.from_members(g, [0]), Separator.from_members(g, [6])])
        metrics = skeleton_metrics(skel)
        assert skel.num_nodes == 4
        assert skel.num_edges == 4
        assert metrics.genus_estimate == 1
        assert metrics.leafs == 0

    def test_node_mass_is_capacity(self):
        g = EmbeddedGraph.from_edges(np.eye(3), [(0, 1), (1, 2)], capacities=[2, 1, 5])
        skel = extract_skeleton(g, [[1]])
        assert skel.graph.capacities.tolist() == [1, 2, 5]
        assert skel.graph.total_capacity == g.total_capacity

    def test_components_are_preserved(self):
        g = disjoint_union(path_graph(4), cycle_graph(6, center=(9.0, 0.0, 0.0)))
        skel = extract_skeleton(g, [[1]])
        assert skeleton_metrics(skel).components == 2

    def test_residual_order_follows_smallest_vertex(self):
        # separator {2} leaves residuals {0,1} and {3,4}
        skel = extract_skeleton(path_graph(5), [[2]])
        assert [p.index for p in skel.provenance[1:]] == [0, 1]
        assert skel.positions[1][0] < skel.positions[2][0]

    # ------------------------------------------------------------------
    # Contract violations
    # ------------------------------------------------------------------
    def test_overlap_rejected(self):
        with pytest.raises(ContractViolation) as exc_info:
            extract_skeleton(path_graph(5), [[1, 2], [2, 3]])
        assert "overlaps" in exc_info.value.message

    def test_empty_separator_rejected(self):
        with pytest.raises(ContractViolation):
            extract_skeleton(path_graph(5), [[]])

    def test_empty_graph_rejected(self):
        with pytest.raises(EmptyInputError):
            extract_skeleton(EmbeddedGraph.empty(), [])


class TestSkeletonMetrics:

    def test_path(self):
        m = skeleton_metrics(Skeleton.from_graph(path_graph(3)))
        assert (m.vertices, m.leafs, m.branches, m.genus_estimate) == (3, 2, 0, 0)

    def test_cycle(self):
        m = skeleton_metrics(Skeleton.from_graph(cycle_graph(4)))
        assert (m.leafs, m.branches, m.genus_estimate) == (0, 0, 1)

    def test_star(self):
        m = skeleton_metrics(Skeleton.from_graph(star_graph(4)))
        assert (m.leafs, m.branches, m.genus_estimate) == (4, 1, 0)

    def test_to_dict(self):
        m = skeleton_metrics(Skeleton.from_graph(path_graph(2)))
        assert m.to_dict()["components"] == 1
        assert m.to_dict()["hausdorff_ab"] is None


class TestHausdorff:

    def setup_method(self):
        self.origin = _skeleton([(0, 0, 0)], [])
        self.segment = _skeleton([(0, 0, 0), (2, 0, 0)], [(0, 1)])

    def test_identical_skeletons(self):
        assert directed_hausdorff(self.segment, self.segment, 1.0) == 0.0

    def test_two_points(self):
        other = _skeleton([(0, 3, 4)], [])
        assert directed_hausdorff(self.origin, other, 2.0) == pytest.approx(2.5)

    def test_directedness(self):
        assert directed_hausdorff(self.segment, self.origin, 1.0) == pytest.approx(2.0)
        assert directed_hausdorff(self.origin, self.segment, 1.0) == 0.0

    def test_scales_inversely_with_normalizer(self):
        a = directed_hausdorff(self.segment, self.origin, 1.0)
        b = directed_hausdorff(self.segment, self.origin, 4.0)
        assert b == pytest.approx(a / 4.0)

    def test_edge_interior_is_sampled(self):
        # same nodes, but only the segment has the edge between them
        endpoints = _skeleton([(0, 0, 0), (2, 0, 0)], [])
        assert directed_hausdorff(self.segment, endpoints, 1.0) == pytest.approx(1.0)
        assert directed_hausdorff(endpoints, self.segment, 1.0) == 0.0

    def test_triangle_inequality(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            a, b, c = (
                _skeleton(rng.random((4, 3)), [(0, 1), (1, 2), (2, 3)]) for _ in range(3)
            )
            ab = directed_hausdorff(a, b, 1.0)
            bc = directed_hausdorff(b, c, 1.0)
            ac = directed_hausdorff(a, c, 1.0)
            assert ac <= ab + bc + 1e-9

    def test_sample_spacing(self):
        points = sample_skeleton(self.segment, 0.5)
        xs = np.sort(points[:, 0])
        assert xs[0] == 0.0
        assert xs[-1] == 2.0
        assert np.max(np.diff(xs)) <= 0.5 + 1e-12

    def test_empty_skeleton_rejected(self):
        empty = Skeleton.from_graph(EmbeddedGraph.empty())
        with pytest.raises(ContractViolation):
            directed_hausdorff(empty, self.origin, 1.0)

    def test_non_positive_normalizer_rejected(self):
        with pytest.raises(ContractViolation):
            directed_hausdorff(self.origin, self.origin, 0.0)
