"""Small embedded graphs and independent oracles used across the test suite."""

import math

import networkx as nx
import numpy as np

from mlskel.domain.graph import EmbeddedGraph


def cycle_graph(n: int, radius: float = 1.0, center=(0.0, 0.0, 0.0)) -> EmbeddedGraph:
    angles = np.arange(n) * (2 * math.pi / n)
    positions = np.stack(
        [center[0] + radius * np.cos(angles), center[1] + radius * np.sin(angles), np.full(n, center[2])],
        axis=1,
    )
    return EmbeddedGraph.from_edges(positions, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int, spacing: float = 1.0) -> EmbeddedGraph:
    positions = np.stack([np.arange(n) * spacing, np.zeros(n), np.zeros(n)], axis=1)
    return EmbeddedGraph.from_edges(positions, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> EmbeddedGraph:
    return cycle_graph(n) if n < 3 else EmbeddedGraph.from_edges(
        cycle_graph(n).positions,
        [(i, j) for i in range(n) for j in range(i + 1, n)],
    )


def star_graph(leaves: int) -> EmbeddedGraph:
    positions = [(0.0, 0.0, 0.0)] + [
        (math.cos(k) * (1 + k / leaves), math.sin(k) * (1 + k / leaves), 0.0) for k in range(leaves)
    ]
    return EmbeddedGraph.from_edges(positions, [(0, k + 1) for k in range(leaves)])


def disjoint_union(a: EmbeddedGraph, b: EmbeddedGraph) -> EmbeddedGraph:
    offset = a.num_vertices
    return EmbeddedGraph.from_edges(
        np.concatenate([a.positions, b.positions]),
        np.concatenate([a.edges(), b.edges() + offset]),
        np.concatenate([a.capacities, b.capacities]),
    )


def random_graph(n: int, p: float, seed: int) -> EmbeddedGraph:
    rng = np.random.default_rng(seed)
    positions = rng.random((n, 3))
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return EmbeddedGraph.from_edges(positions, np.asarray(edges, dtype=np.int64).reshape(-1, 2))


def to_networkx(graph: EmbeddedGraph) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(graph.num_vertices))
    g.add_edges_from(graph.edges().tolist())
    return g


def oracle_is_local_separator(g: nx.Graph, members) -> bool:
    """Independent check: components of N[S] minus S."""
    members = set(members)
    closed = set(members)
    for v in members:
        closed.update(g.neighbors(v))
    rest = g.subgraph(closed - members)
    return rest.number_of_nodes() > 0 and nx.number_connected_components(rest) >= 2


def oracle_is_minimal(g: nx.Graph, members) -> bool:
    members = set(members)
    if not oracle_is_local_separator(g, members):
        return False
    for v in members:
        rest = members - {v}
        if rest and nx.is_connected(g.subgraph(rest)) and oracle_is_local_separator(g, rest):
            return False
    return True
