"""Skeleton extraction from a disjoint separator set, and skeleton quality metrics."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _csgraph_components
from scipy.spatial import KDTree

from mlskel.config.settings import BaseConfig
from mlskel.domain.exceptions import ContractViolation, EmptyInputError
from mlskel.domain.graph import EmbeddedGraph, connected_components

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NodeSource:
    """Where a skeleton node came from: a packed separator, a residual component, or a file."""

    kind: str
    index: int
    size: int = 0


@dataclass(frozen=True, eq=False)
class Skeleton:
    """Curve skeleton: an embedded graph plus per-node provenance."""

    graph: EmbeddedGraph
    provenance: tuple[NodeSource, ...]

    @classmethod
    def from_graph(cls, graph: EmbeddedGraph) -> Skeleton:
        """Wrap a graph read from disk; every node is its own source."""
        return cls(
            graph=graph,
            provenance=tuple(NodeSource("loaded", i, 1) for i in range(graph.num_vertices)),
        )

    @property
    def num_nodes(self) -> int:
        return self.graph.num_vertices

    @property
    def num_edges(self) -> int:
        return self.graph.num_edges

    @property
    def positions(self) -> np.ndarray:
        return self.graph.positions

    def edges(self) -> np.ndarray:
        return self.graph.edges()


@dataclass(frozen=True)
class SkeletonMetrics:
    vertices: int
    leafs: int
    branches: int
    genus_estimate: int
    components: int
    hausdorff_ab: float | None = None
    hausdorff_ba: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------------------
# Extraction
# ---------------------------------------------------------------------------
def extract_skeleton(graph: EmbeddedGraph, separators: Sequence[Iterable[int]]) -> Skeleton:
    """Quotient ``graph`` by the separators and the residual components between them.

    Node ``i < len(separators)`` stands for separator ``i``; the remaining
    nodes are the connected components of the graph with every separator
    vertex removed, ordered by their smallest vertex id. Two nodes are joined
    iff their vertex sets are adjacent in ``graph``.
    """
    n = graph.num_vertices
    if n == 0:
        raise EmptyInputError("Cannot extract a skeleton from an empty graph")

    node_of = np.full(n, -1, dtype=np.int64)
    sizes: list[int] = []
    for i, sep in enumerate(separators):
        members = np.fromiter((int(v) for v in getattr(sep, "members", sep)), dtype=np.int64)
        if members.size == 0:
            raise ContractViolation(f"Separator {i} is empty")
        if np.any(node_of[members] != -1):
            raise ContractViolation(f"Separator {i} overlaps an earlier separator")
        node_of[members] = i
        sizes.append(int(members.size))
    num_separators = len(sizes)

    residual = node_of == -1
    edges = graph.edges()
    if residual.any():
        keep = residual[edges[:, 0]] & residual[edges[:, 1]]
        sub = edges[keep]
        matrix = coo_matrix(
            (np.ones(sub.shape[0], dtype=np.int8), (sub[:, 0], sub[:, 1])),
            shape=(n, n),
        )
        _, labels = _csgraph_components(matrix, directed=False)
        # relabel residual components by first (smallest) vertex
        residual_ids = np.flatnonzero(residual)
        _, first, inverse = np.unique(labels[residual_ids], return_index=True, return_inverse=True)
        rank = np.empty(first.shape[0], dtype=np.int64)
        rank[np.argsort(first, kind="stable")] = np.arange(first.shape[0])
        node_of[residual_ids] = num_separators + rank[inverse]
        sizes.extend(np.bincount(rank[inverse], minlength=first.shape[0]).tolist())

    num_nodes = len(sizes)
    weights = graph.capacities.astype(np.float64)
    mass = np.bincount(node_of, weights=weights, minlength=num_nodes)
    positions = np.stack(
        [np.bincount(node_of, weights=graph.positions[:, k] * weights, minlength=num_nodes) for k in range(3)],
        axis=1,
    ) / mass[:, None]

    quotient = node_of[edges]
    skeleton_graph = EmbeddedGraph.from_edges(
        positions,
        quotient[quotient[:, 0] != quotient[:, 1]],
        np.rint(mass).astype(np.int64),
    )
    provenance = tuple(
        NodeSource("separator" if i < num_separators else "residual",
                   i if i < num_separators else i - num_separators,
                   sizes[i])
        for i in range(num_nodes)
    )
    logger.info(
        "Extracted skeleton: nodes=%s edges=%s separators=%s residual=%s",
        num_nodes, skeleton_graph.num_edges, num_separators, num_nodes - num_separators,
    )
    return Skeleton(graph=skeleton_graph, provenance=provenance)


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------
def skeleton_metrics(skeleton: Skeleton) -> SkeletonMetrics:
    """Vertex, leaf and branch counts plus the cycle rank as genus estimate."""
    graph = skeleton.graph
    degrees = np.fromiter((len(nbrs) for nbrs in graph.adjacency), dtype=np.int64, count=graph.num_vertices)
    components, _ = connected_components(graph)
    return SkeletonMetrics(
        vertices=graph.num_vertices,
        leafs=int(np.count_nonzero(degrees == 1)),
        branches=int(np.count_nonzero(degrees >= 3)),
        genus_estimate=graph.num_edges - graph.num_vertices + components,
        components=components,
    )


def sample_skeleton(skeleton: Skeleton, spacing: float) -> np.ndarray:
    """Nodes plus points along every edge so consecutive samples are at most ``spacing`` apart."""
    positions = skeleton.positions
    edges = skeleton.edges()
    if edges.shape[0] == 0 or spacing <= 0:
        return positions.copy()

    a = positions[edges[:, 0]]
    b = positions[edges[:, 1]]
    steps = np.maximum(np.ceil(np.linalg.norm(b - a, axis=1) / spacing).astype(np.int64), 1)
    interior = steps - 1
    if interior.sum() == 0:
        return positions.copy()

    owner = np.repeat(np.arange(edges.shape[0]), interior)
    offsets = np.arange(interior.sum()) - np.repeat(np.cumsum(interior) - interior, interior) + 1
    t = (offsets / steps[owner])[:, None]
    along = a[owner] + t * (b[owner] - a[owner])
    return np.concatenate([positions, along])


def directed_hausdorff(
    a: Skeleton,
    b: Skeleton,
    normalizer: float,
    samples_per_radius: int = BaseConfig.HAUSDORFF_SAMPLES_PER_RADIUS,
) -> float:
    """Largest distance from a sample of ``a`` to its nearest sample of ``b``, over ``normalizer``."""
    if a.num_nodes == 0 or b.num_nodes == 0:
        raise ContractViolation("directed_hausdorff needs two non-empty skeletons")
    if normalizer <= 0:
        raise ContractViolation(f"Normalizer must be positive, got {normalizer}")

    spacing = normalizer / samples_per_radius
    source = sample_skeleton(a, spacing)
    target = sample_skeleton(b, spacing)
    distances, _ = KDTree(target).query(source)
    return float(np.max(distances)) / normalizer
