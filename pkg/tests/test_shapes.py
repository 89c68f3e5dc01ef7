"""
Tests for the synthetic mesh generators used by tests and bench series.
"""

import numpy as np
import pytest

from mlskel.domain.exceptions import ContractViolation
from mlskel.domain.graph import EmbeddedGraph, connected_components
from mlskel.domain.shapes import double_torus_mesh, euler_genus, loop_subdivide, torus_mesh, uv_sphere_mesh


class TestGenerators:

    def test_torus_counts(self):
        vertices, faces = torus_mesh(8, 4)
        assert vertices.shape == (32, 3)
        assert faces.shape == (64, 3)
        assert EmbeddedGraph.from_faces(vertices, faces).num_edges == 96

    def test_torus_genus(self):
        assert euler_genus(*torus_mesh(12, 6)) == 1

    def test_sphere_genus(self):
        vertices, faces = uv_sphere_mesh(6, 8)
        assert vertices.shape[0] == 2 + 5 * 8
        assert euler_genus(vertices, faces) == 0

    def test_torus_too_coarse(self):
        with pytest.raises(ContractViolation):
            torus_mesh(2, 8)

    def test_double_torus_is_one_closed_piece(self):
        vertices, faces = double_torus_mesh()
        assert vertices.shape[0] > 0
        assert faces.min() >= 0
        assert faces.max() < vertices.shape[0]
        count, _ = connected_components(EmbeddedGraph.from_faces(vertices, faces))
        assert count == 1


class TestSubdivision:

    def test_counts(self):
        vertices, faces = torus_mesh(8, 4)
        sub_v, sub_f = loop_subdivide(vertices, faces)
        assert sub_v.shape[0] == 32 + 96
        assert sub_f.shape[0] == 4 * 64

    def test_genus_is_preserved(self):
        vertices, faces = uv_sphere_mesh(4, 6)
        for _ in range(2):
            vertices, faces = loop_subdivide(vertices, faces)
        assert euler_genus(vertices, faces) == 0
        assert euler_genus(*loop_subdivide(*torus_mesh(8, 4))) == 1

    def test_midpoints(self):
        vertices = np.array([(0, 0, 0), (2, 0, 0), (0, 2, 0)], dtype=float)
        sub_v, sub_f = loop_subdivide(vertices, [(0, 1, 2)])
        assert sub_v.shape[0] == 6
        assert sub_f.shape[0] == 4
        assert {tuple(p) for p in sub_v[3:].tolist()} == {(1.0, 0.0, 0.0), (1.0, 1.0, 0.0), (0.0, 1.0, 0.0)}
