"""Shared test fixtures."""

import pytest

from mlskel.api import create_app
from mlskel.domain.graph import EmbeddedGraph
from mlskel.domain.shapes import torus_mesh
from tests.graphs import cycle_graph, path_graph


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-scale runs, deselect with -m 'not slow'")


@pytest.fixture(scope="session")
def app():
    """Create an application instance configured for testing."""
    return create_app("testing")


@pytest.fixture()
def client(app):
    """Flask test client."""
    return app.test_client()


@pytest.fixture(scope="session")
def torus_graph() -> EmbeddedGraph:
    """1-skeleton of a 16 x 8 triangulated torus (128 vertices)."""
    vertices, faces = torus_mesh(16, 8)
    return EmbeddedGraph.from_faces(vertices, faces)


@pytest.fixture()
def c8() -> EmbeddedGraph:
    return cycle_graph(8)


@pytest.fixture()
def p5() -> EmbeddedGraph:
    return path_graph(5)
