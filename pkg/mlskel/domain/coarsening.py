"""Coarsening by repeated light-edge-matching contraction.

Builds the hierarchy G_0 > G_1 > ... > G_l of graph minors, recording for
each level step which fine vertices each coarse vertex absorbed and summing
capacities so a coarse vertex knows how many input vertices it stands for.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from mlskel.config.settings import BaseConfig
from mlskel.domain.exceptions import ContractViolation
from mlskel.domain.graph import EmbeddedGraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ContractionRecord:
    """Mapping between two adjacent levels.

    ``parent[u]`` is the coarse vertex that fine vertex ``u`` was contracted
    into; ``children`` is its inverse and partitions the fine vertex range.
    """

    fine_level: int
    coarse_level: int
    parent: np.ndarray
    num_coarse: int
    rounds: int = 1
    halved: bool = True
    stalled: bool = False

    @property
    def num_fine(self) -> int:
        return int(self.parent.shape[0])

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        order = np.argsort(self.parent, kind="stable")
        counts = np.bincount(self.parent, minlength=self.num_coarse)
        groups = np.split(order, np.cumsum(counts)[:-1]) if self.num_coarse else []
        return tuple(tuple(g.tolist()) for g in groups)


@dataclass(frozen=True)
class LevelHierarchy:
    """Graphs ``G_0 .. G_l`` and the ``l`` records between adjacent levels."""

    graphs: tuple[EmbeddedGraph, ...]
    records: tuple[ContractionRecord, ...]
    stalled: bool = False

    @property
    def num_levels(self) -> int:
        return len(self.graphs)

    def __len__(self) -> int:
        return len(self.graphs)


# ---------------------------------------------------------------------------
# Matching and contraction
# ---------------------------------------------------------------------------
def light_edge_matching(
    graph: EmbeddedGraph,
    rng: np.random.Generator,
    order: Sequence[int] | None = None,
) -> list[tuple[int, int]]:
    """Greedy maximal matching preferring the geometrically shortest edge.

    Vertices are visited in random order (or the explicit ``order``); each
    unmatched vertex is matched to its nearest unmatched neighbour, ties
    broken by the smaller neighbour id.
    """
    n = graph.num_vertices
    visit = rng.permutation(n).tolist() if order is None else [int(v) for v in order]
    coords = graph.coords
    adjacency = graph.adjacency
    matched = [False] * n
    pairs: list[tuple[int, int]] = []

    for u in visit:
        if matched[u]:
            continue
        pu = coords[u]
        best: tuple[float, int] | None = None
        for v in adjacency[u]:
            if matched[v]:
                continue
            key = (math.dist(pu, coords[v]), v)
            if best is None or key < best:
                best = key
        if best is not None:
            v = best[1]
            matched[u] = matched[v] = True
            pairs.append((u, v))
    return pairs


def contract(
    graph: EmbeddedGraph,
    matching: Sequence[tuple[int, int]],
    fine_level: int = 0,
) -> tuple[EmbeddedGraph, ContractionRecord]:
    """Contract every matched pair into one vertex.

    Coarse ids follow the smallest fine id of each group. A coarse vertex sits
    at the capacity-weighted mean of its children and carries the sum of
    their capacities; parallel edges collapse and self-loops drop.
    """
    n = graph.num_vertices
    rep = np.arange(n, dtype=np.int64)
    used: set[int] = set()
    for u, v in matching:
        u, v = int(u), int(v)
        if u in used or v in used:
            raise ContractViolation(f"Matching is not vertex-disjoint at ({u}, {v})")
        if u == v or v not in graph.adjacency[u]:
            raise ContractViolation(f"({u}, {v}) is not an edge of the graph")
        used.update((u, v))
        rep[max(u, v)] = min(u, v)

    coarse_ids = np.cumsum(rep == np.arange(n)) - 1
    parent = coarse_ids[rep]
    num_coarse = int(coarse_ids[-1] + 1) if n else 0

    weights = graph.capacities.astype(np.float64)
    capacity = np.bincount(parent, weights=weights, minlength=num_coarse)
    positions = np.stack(
        [
            np.bincount(parent, weights=graph.positions[:, k] * weights, minlength=num_coarse)
            for k in range(3)
        ],
        axis=1,
    ) / np.maximum(capacity, 1.0)[:, None]

    coarse = EmbeddedGraph.from_edges(
        positions,
        parent[graph.edges()],
        np.rint(capacity).astype(np.int64),
    )
    record = ContractionRecord(
        fine_level=fine_level,
        coarse_level=fine_level + 1,
        parent=parent,
        num_coarse=num_coarse,
    )
    return coarse, record


def coarsen_level(
    graph: EmbeddedGraph,
    rng: np.random.Generator,
    max_rounds: int = BaseConfig.MAX_MATCHING_ROUNDS,
    level: int = 0,
) -> tuple[EmbeddedGraph, ContractionRecord]:
    """Run matching rounds until the vertex count is at least halved.

    At most ``max_rounds`` rounds run; if halving is not reached the partial
    reduction is accepted. A round that matches nothing marks the record as
    stalled.
    """
    n = graph.num_vertices
    if n < 2:
        raise ContractViolation(f"Cannot coarsen a graph with {n} vertices")

    target = n // 2
    current = graph
    parent = np.arange(n, dtype=np.int64)
    rounds = 0
    stalled = False

    while current.num_vertices > target and rounds < max_rounds:
        matching = light_edge_matching(current, rng)
        if not matching:
            stalled = True
            break
        current, step = contract(current, matching, fine_level=level)
        parent = step.parent[parent]
        rounds += 1
        logger.debug(
            "Level %s round %s: matched=%s vertices=%s",
            level, rounds, len(matching), current.num_vertices,
        )

    record = ContractionRecord(
        fine_level=level,
        coarse_level=level + 1,
        parent=parent,
        num_coarse=current.num_vertices,
        rounds=rounds,
        halved=current.num_vertices <= target,
        stalled=stalled,
    )
    return current, record


def build_hierarchy(
    graph: EmbeddedGraph,
    alpha: int,
    rng: np.random.Generator | None = None,
    max_rounds: int = BaseConfig.MAX_MATCHING_ROUNDS,
) -> LevelHierarchy:
    """Coarsen until the last level has at most ``alpha`` vertices or coarsening stalls."""
    if alpha < 1:
        raise ContractViolation(f"alpha must be >= 1, got {alpha}")
    rng = rng if rng is not None else np.random.default_rng(BaseConfig.DEFAULT_SEED)

    graphs = [graph]
    records: list[ContractionRecord] = []
    stalled = False

    while graphs[-1].num_vertices > alpha and graphs[-1].num_vertices >= 2:
        fine = graphs[-1]
        coarse, record = coarsen_level(fine, rng, max_rounds, level=len(graphs) - 1)
        if coarse.num_vertices < fine.num_vertices:
            graphs.append(coarse)
            records.append(record)
        if record.stalled:
            stalled = True
            logger.warning(
                "Coarsening stalled at level %s with %s vertices",
                len(graphs) - 1, graphs[-1].num_vertices,
            )
            break

    logger.info(
        "Hierarchy built: levels=%s sizes=%s",
        len(graphs), [g.num_vertices for g in graphs],
    )
    return LevelHierarchy(graphs=tuple(graphs), records=tuple(records), stalled=stalled)
