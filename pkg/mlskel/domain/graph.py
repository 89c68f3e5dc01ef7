"""Spatially embedded graphs and the exact predicates the pipeline is checked against.

Pure data and graph logic with no I/O. Every other module works on
``EmbeddedGraph`` and validates its results with the predicates defined here.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _csgraph_components

from mlskel.domain.exceptions import ContractViolation

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class EmbeddedGraph:
    """Undirected simple graph with a 3D position and a capacity per vertex.

    Vertices are the dense range ``[0, n)``. Adjacency lists are sorted,
    symmetric and free of self-loops and duplicates. Instances are immutable
    and safe to share between threads.
    """

    positions: np.ndarray
    capacities: np.ndarray
    adjacency: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(
        cls,
        positions,
        edges,
        capacities=None,
    ) -> EmbeddedGraph:
        """Build a graph from positions and an (unordered, possibly redundant) edge list.

        Self-loops are dropped and parallel edges collapse. Capacities
        default to 1 for every vertex.
        """
        pos = np.asarray(positions, dtype=np.float64).reshape(-1, 3)
        n = pos.shape[0]

        if capacities is None:
            caps = np.ones(n, dtype=np.int64)
        else:
            caps = np.asarray(capacities, dtype=np.int64).reshape(-1)
            if caps.shape[0] != n:
                raise ContractViolation(
                    f"Expected {n} capacities, got {caps.shape[0]}",
                )
            if n and caps.min() < 1:
                raise ContractViolation("Vertex capacities must be >= 1")

        pairs = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
            raise ContractViolation(
                f"Edge endpoint out of range for a graph with {n} vertices",
            )

        pos.setflags(write=False)
        caps.setflags(write=False)
        return cls(positions=pos, capacities=caps, adjacency=_build_adjacency(n, pairs))

    @classmethod
    def from_faces(cls, positions, faces) -> EmbeddedGraph:
        """1-skeleton of a polygon mesh; polygons are fan-triangulated from their first corner."""
        pairs = []
        for face in faces:
            corners = [int(c) for c in face]
            if len(corners) < 3:
                raise ContractViolation(f"Face with {len(corners)} corners")
            first = corners[0]
            for a, b in zip(corners[1:-1], corners[2:]):
                pairs.extend(((first, a), (a, b), (b, first)))
        return cls.from_edges(positions, pairs)

    @classmethod
    def empty(cls) -> EmbeddedGraph:
        return cls.from_edges(np.zeros((0, 3)), np.zeros((0, 2), dtype=np.int64))

    # ------------------------------------------------------------------
    # Basic queries
    # ------------------------------------------------------------------
    @property
    def num_vertices(self) -> int:
        return len(self.adjacency)

    @cached_property
    def num_edges(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def edges(self) -> np.ndarray:
        """Return the edge list as an ``(m, 2)`` array with ``u < v``, sorted."""
        out = [(u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u < v]
        return np.asarray(out, dtype=np.int64).reshape(-1, 2)

    @cached_property
    def coords(self) -> list[tuple[float, float, float]]:
        """Positions as plain tuples, for tight per-vertex loops."""
        return [tuple(p) for p in self.positions.tolist()]

    @property
    def total_capacity(self) -> int:
        return int(self.capacities.sum())

    def to_sparse(self) -> csr_matrix:
        """Symmetric 0/1 adjacency matrix."""
        n = self.num_vertices
        indptr = np.zeros(n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(nbrs) for nbrs in self.adjacency])
        indices = np.fromiter(
            (v for nbrs in self.adjacency for v in nbrs),
            dtype=np.int64,
            count=int(indptr[-1]),
        )
        data = np.ones(indices.shape[0], dtype=np.int8)
        return csr_matrix((data, indices, indptr), shape=(n, n))

    def barycenter(self, members: Iterable[int]) -> np.ndarray:
        """Capacity-weighted mean position of a vertex subset."""
        idx = np.fromiter(members, dtype=np.int64)
        if idx.size == 0:
            raise ContractViolation("Barycenter of an empty vertex set")
        weights = self.capacities[idx].astype(np.float64)
        return (self.positions[idx] * weights[:, None]).sum(axis=0) / weights.sum()


@dataclass(frozen=True)
class VertexSet:
    """A set of vertex ids on a given level of the hierarchy."""

    level: int
    members: frozenset[int] = field(default_factory=frozenset)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))


@dataclass(frozen=True, eq=False)
class BoundingSphere:
    """Sphere covering a point set (model units)."""

    center: np.ndarray
    radius: float

    def covers(self, points, tolerance: float = 1e-9) -> bool:
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        if pts.size == 0:
            return True
        dist = np.linalg.norm(pts - self.center, axis=1)
        return bool(np.all(dist <= self.radius * (1.0 + tolerance) + 1e-300))


# ---------------------------------------------------------------------------
# Whole-graph queries
# ---------------------------------------------------------------------------
def connected_components(graph: EmbeddedGraph) -> tuple[int, np.ndarray]:
    """Return the component count and a per-vertex label array."""
    if graph.num_vertices == 0:
        return 0, np.zeros(0, dtype=np.int64)
    count, labels = _csgraph_components(graph.to_sparse(), directed=False)
    return int(count), labels.astype(np.int64)


def bounding_sphere(points) -> BoundingSphere:
    """Approximate enclosing sphere by the two-pass farthest-point construction.

    Start at the first point, take the farthest point ``a`` from it, then the
    farthest point ``b`` from ``a``; the center is the midpoint of ``ab`` and
    the radius is grown to cover every point. The result is within a factor
    sqrt(3) of the minimal enclosing radius.
    """
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    if pts.shape[0] == 0:
        raise ContractViolation("bounding_sphere needs at least one point")

    a = pts[int(np.argmax(np.linalg.norm(pts - pts[0], axis=1)))]
    b = pts[int(np.argmax(np.linalg.norm(pts - a, axis=1)))]
    center = (a + b) / 2.0
    radius = float(np.linalg.norm(pts - center, axis=1).max())
    return BoundingSphere(center=center, radius=radius)


# ---------------------------------------------------------------------------
# Local separator predicates
# ---------------------------------------------------------------------------
def vertex_members(graph: EmbeddedGraph, vertices) -> frozenset[int]:
    """Normalise a ``VertexSet`` or iterable of ids, checking the id range."""
    members = vertices.members if isinstance(vertices, VertexSet) else frozenset(
        int(v) for v in vertices
    )
    n = graph.num_vertices
    for v in members:
        if not 0 <= v < n:
            raise ContractViolation(f"Vertex {v} out of range [0, {n})")
    return members


def is_connected_subset(graph: EmbeddedGraph, members: frozenset[int] | set[int]) -> bool:
    """True iff ``members`` is non-empty and induces a connected subgraph."""
    if not members:
        return False
    start = next(iter(members))
    seen = {start}
    queue = deque([start])
    adjacency = graph.adjacency
    while queue:
        v = queue.popleft()
        for u in adjacency[v]:
            if u in members and u not in seen:
                seen.add(u)
                queue.append(u)
    return len(seen) == len(members)


def front_vertices(graph: EmbeddedGraph, members) -> set[int]:
    """Vertices adjacent to ``members`` that are not members themselves."""
    adjacency = graph.adjacency
    return {u for v in members for u in adjacency[v] if u not in members}


def count_front_components(graph: EmbeddedGraph, members, stop_at: int | None = None) -> int:
    """Number of connected components of the subgraph induced by the front.

    With ``stop_at`` the count stops early once it reaches that value.
    """
    front = front_vertices(graph, members)
    adjacency = graph.adjacency
    seen: set[int] = set()
    count = 0
    for start in sorted(front):
        if start in seen:
            continue
        count += 1
        if stop_at is not None and count >= stop_at:
            return count
        seen.add(start)
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in adjacency[v]:
                if u in front and u not in seen:
                    seen.add(u)
                    queue.append(u)
    return count


def separates(graph: EmbeddedGraph, members) -> bool:
    """Unchecked local-separator test for a connected, non-empty member set."""
    return count_front_components(graph, members, stop_at=2) >= 2


def is_local_separator(graph: EmbeddedGraph, vertices) -> bool:
    """True iff removing the set from its closed neighbourhood leaves >= 2 components.

    The set must be non-empty and induce a connected subgraph.
    """
    members = vertex_members(graph, vertices)
    if not members:
        raise ContractViolation("A local separator must be non-empty")
    if not is_connected_subset(graph, members):
        raise ContractViolation("A local separator must induce a connected subgraph")
    return separates(graph, members)


def is_minimal_local_separator(graph: EmbeddedGraph, vertices) -> bool:
    """True iff no single vertex can be dropped while keeping a local separator.

    A remainder that is empty or disconnected does not count as a separator.
    """
    members = vertex_members(graph, vertices)
    if not is_local_separator(graph, members):
        raise ContractViolation("Minimality is only defined for local separators")
    for v in members:
        rest = members - {v}
        if rest and is_connected_subset(graph, rest) and separates(graph, rest):
            return False
    return True


# ---------------------------------------------------------------------------
# Internal helpers
# ---------------------------------------------------------------------------
def _build_adjacency(n: int, pairs: np.ndarray) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ()
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    pairs = np.unique(np.sort(pairs, axis=1), axis=0)
    both = np.concatenate([pairs, pairs[:, ::-1]])
    both = both[np.lexsort((both[:, 1], both[:, 0]))]
    counts = np.bincount(both[:, 0], minlength=n)
    groups = np.split(both[:, 1], np.cumsum(counts)[:-1])
    return tuple(tuple(g.tolist()) for g in groups)
