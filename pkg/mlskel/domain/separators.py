"""Local separators on a single level: restricted search, shrinking, thickening.

The search grows a connected vertex set from a start vertex, always taking
the front vertex nearest to an enclosing sphere, and stops as soon as the
front (the subgraph induced by the set's neighbours) falls apart. The front
is maintained incrementally in a connectivity backend so no traversal is
needed per step.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field

from mlskel.config.settings import BaseConfig
from mlskel.domain.dyncon import ConnectivityBackend, DynamicConnectivity
from mlskel.domain.exceptions import ContractViolation
from mlskel.domain.graph import (
    EmbeddedGraph,
    front_vertices,
    is_connected_subset,
    is_local_separator,
    separates,
)

logger = logging.getLogger(__name__)

ConnectivityFactory = Callable[..., ConnectivityBackend]

Point = tuple[float, float, float]


@dataclass(frozen=True)
class Separator:
    """A connected local separator on one level of the hierarchy."""

    level: int
    members: frozenset[int]
    footprint: int
    center: Point | None = None

    @classmethod
    def from_members(
        cls,
        graph: EmbeddedGraph,
        members: Iterable[int],
        level: int = 0,
        center: Point | None = None,
    ) -> Separator:
        member_set = frozenset(int(v) for v in members)
        capacities = graph.capacities
        footprint = sum(int(capacities[v]) for v in member_set)
        return cls(level=level, members=member_set, footprint=footprint, center=center)

    @property
    def sorted_members(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)


@dataclass
class SearchState:
    """Working state of one restricted search (private to that search)."""

    sigma: set[int]
    front: set[int]
    connectivity: ConnectivityBackend
    center: Point
    radius: float = 0.0
    iteration: int = 0
    absorbed_order: list[int] = field(default_factory=list)

    def front_components(self) -> int:
        # vertices outside the front have no edges in the backend
        return self.connectivity.number_of_components() - (self.connectivity.n - len(self.front))


# ---------------------------------------------------------------------------
# Search
# ---------------------------------------------------------------------------
def restricted_separator_search(
    graph: EmbeddedGraph,
    v0: int,
    alpha: int,
    level: int = 0,
    connectivity: ConnectivityFactory = DynamicConnectivity,
    dyncon_threshold: int | None = None,
    epsilon: float = BaseConfig.SPHERE_EPSILON,
) -> Separator | None:
    """Grow a local separator of at most ``alpha`` vertices from ``v0``.

    Returns ``None`` when the front becomes empty or the budget is spent
    while the front is still connected.
    """
    if alpha < 1:
        raise ContractViolation(f"alpha must be >= 1, got {alpha}")
    if not 0 <= v0 < graph.num_vertices:
        raise ContractViolation(f"Start vertex {v0} out of range")

    coords = graph.coords
    state = SearchState(
        sigma=set(),
        front={v0},
        connectivity=connectivity(graph.num_vertices, level_threshold=dyncon_threshold),
        center=coords[v0],
    )

    while True:
        center = state.center
        v = min(state.front, key=lambda f: (math.dist(center, coords[f]), f))
        _update_sphere(state, coords[v], epsilon)
        _absorb(graph, state, v)
        state.iteration += 1

        components = state.front_components()
        if components > 1:
            return Separator.from_members(graph, state.sigma, level=level, center=state.center)
        if components == 0 or state.iteration >= alpha:
            return None


def _update_sphere(state: SearchState, p: Point, epsilon: float) -> None:
    c = state.center
    d = math.dist(c, p)
    if d <= state.radius:
        return
    state.radius = 0.5 * (state.radius + d)
    scale = state.radius / (epsilon + d)
    state.center = (
        p[0] + scale * (c[0] - p[0]),
        p[1] + scale * (c[1] - p[1]),
        p[2] + scale * (c[2] - p[2]),
    )


def _absorb(graph: EmbeddedGraph, state: SearchState, v: int) -> None:
    """Move ``v`` from the front into the separator and repair the front edges."""
    adjacency = graph.adjacency
    front = state.front
    conn = state.connectivity

    front.discard(v)
    state.sigma.add(v)
    state.absorbed_order.append(v)
    for u in adjacency[v]:
        if u in front:
            conn.remove(v, u)

    for x in adjacency[v]:
        if x in state.sigma or x in front:
            continue
        front.add(x)
        for y in adjacency[x]:
            if y in front and y != x:
                conn.connect(x, y)


# ---------------------------------------------------------------------------
# Shrinking and thickening
# ---------------------------------------------------------------------------
def shrink_separator(
    graph: EmbeddedGraph,
    separator: Separator,
    center: Point | None = None,
) -> Separator:
    """Drop vertices until the separator is minimal.

    Vertices are ranked by their distance to the separator center, smoothed
    over their neighbours inside the separator, and tried farthest first.
    The scan order is descending smoothed distance, ties by ascending id.
    Scans repeat until a full pass removes nothing.
    """
    if not is_local_separator(graph, separator.members):
        raise ContractViolation("shrink_separator needs a valid local separator")

    members = set(separator.members)
    if center is None:
        center = separator.center
    if center is None:
        center = tuple(graph.barycenter(members).tolist())

    coords = graph.coords
    adjacency = graph.adjacency
    distance = {v: math.dist(coords[v], center) for v in members}
    smoothed = {}
    for v in members:
        inside = [distance[u] for u in adjacency[v] if u in members]
        smoothed[v] = (distance[v] + sum(inside)) / (1 + len(inside))
    order = sorted(members, key=lambda v: (-smoothed[v], v))

    changed = True
    while changed:
        changed = False
        for v in order:
            if v not in members or len(members) == 1:
                continue
            rest = members - {v}
            if is_connected_subset(graph, rest) and separates(graph, rest):
                members = rest
                changed = True

    return Separator.from_members(graph, members, level=separator.level, center=center)


def thicken_separator(graph: EmbeddedGraph, separator: Separator) -> Separator:
    """Add each front vertex (ascending id) whose addition keeps a local separator."""
    if not is_local_separator(graph, separator.members):
        raise ContractViolation("thicken_separator needs a valid local separator")

    members = set(separator.members)
    for v in sorted(front_vertices(graph, separator.members)):
        candidate = members | {v}
        if separates(graph, candidate):
            members = candidate
    return Separator.from_members(graph, members, level=separator.level, center=separator.center)


def separator_length(graph: EmbeddedGraph, separator: Separator) -> float:
    """Total Euclidean length of the edges induced by the separator."""
    coords = graph.coords
    adjacency = graph.adjacency
    members = separator.members
    return sum(
        math.dist(coords[u], coords[v])
        for u in members
        for v in adjacency[u]
        if v in members and u < v
    )
