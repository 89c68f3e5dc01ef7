"""Multilevel orchestration: sample, search, project, refine, deduplicate, pack.

Levels are processed from the coarsest down to the input graph. On every
level the separators packed on the level above are projected and refined,
new separators are searched from sampled start vertices, and the combined
pool is deduplicated and packed against vertex capacities. The packed pool
on the input level is pairwise disjoint and feeds skeleton extraction.
"""

from __future__ import annotations

import logging
import time
from collections import Counter
from collections.abc import Callable, Iterable, Iterator, Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial

import numpy as np

from mlskel.domain.coarsening import ContractionRecord, LevelHierarchy, build_hierarchy
from mlskel.domain.dyncon import DynamicConnectivity
from mlskel.domain.exceptions import ContractViolation, EmptyInputError
from mlskel.domain.graph import EmbeddedGraph, is_connected_subset, separates
from mlskel.domain.separators import (
    ConnectivityFactory,
    Separator,
    restricted_separator_search,
    shrink_separator,
    thicken_separator,
)
from mlskel.domain.skeleton import Skeleton, extract_skeleton
from mlskel.schemas.run_schema import RunConfig

logger = logging.getLogger(__name__)

SHRINK_ONLY = "shrink_only"
THICKEN_THEN_SHRINK = "thicken_then_shrink"
REFINE_MODES = (SHRINK_ONLY, THICKEN_THEN_SHRINK)


# ---------------------------------------------------------------------------
# Pool
# ---------------------------------------------------------------------------
@dataclass
class SeparatorPool:
    """Separators on one level plus how many of them contain each vertex."""

    level: int
    separators: list[Separator] = field(default_factory=list)
    usage: Counter = field(default_factory=Counter)

    @classmethod
    def from_separators(cls, level: int, separators: Iterable[Separator]) -> SeparatorPool:
        pool = cls(level=level)
        for sep in separators:
            pool.add(sep)
        return pool

    def add(self, separator: Separator) -> None:
        self.separators.append(separator)
        self.usage.update(separator.members)

    def __len__(self) -> int:
        return len(self.separators)

    def __iter__(self) -> Iterator[Separator]:
        return iter(self.separators)


@dataclass
class LevelStats:
    level: int
    vertices: int
    edges: int
    sampled: int = 0
    found: int = 0
    projected: int = 0
    refine_failures: int = 0
    deduped: int = 0
    packed: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class MultilevelResult:
    """Skeleton plus everything a run report needs."""

    skeleton: Skeleton
    separators: tuple[Separator, ...]
    levels: list[LevelStats]
    timings: dict[str, float]
    num_levels: int
    stalled: bool = False


# ---------------------------------------------------------------------------
# Projection and refinement
# ---------------------------------------------------------------------------
def project_separator(record: ContractionRecord, separator: Separator) -> Separator:
    """Replace every coarse vertex by the fine vertices it absorbed.

    Footprint is carried over unchanged. The projected set is connected on
    the fine level but need not separate anymore.
    """
    if separator.level != record.coarse_level:
        raise ContractViolation(
            f"Separator on level {separator.level} cannot use the record "
            f"{record.fine_level}->{record.coarse_level}"
        )
    children = record.children
    members = frozenset(u for v in separator.members for u in children[v])
    return Separator(level=record.fine_level, members=members, footprint=separator.footprint)


def refine_separator(
    graph: EmbeddedGraph,
    separator: Separator,
    mode: str = SHRINK_ONLY,
) -> Separator | None:
    """Turn a projected set back into a minimal local separator, or ``None``."""
    if mode not in REFINE_MODES:
        raise ContractViolation(f"Unknown refine mode '{mode}'")
    if not is_connected_subset(graph, separator.members):
        raise ContractViolation("refine_separator needs a connected vertex set")
    if not separates(graph, separator.members):
        logger.debug("Refinement failed on level %s: size=%s", separator.level, len(separator))
        return None

    if mode == THICKEN_THEN_SHRINK:
        separator = thicken_separator(graph, separator)
    return shrink_separator(graph, separator)


# ---------------------------------------------------------------------------
# Filtering and packing
# ---------------------------------------------------------------------------
def dedup_filter(pool: SeparatorPool) -> SeparatorPool:
    """Drop separators whose member set equals an earlier one."""
    seen: set[frozenset[int]] = set()
    kept = []
    for sep in pool:
        if sep.members in seen:
            continue
        seen.add(sep.members)
        kept.append(sep)
    return SeparatorPool.from_separators(pool.level, kept)


def capacity_pack(graph: EmbeddedGraph, pool: SeparatorPool, isolated: bool = False) -> SeparatorPool:
    """Greedily admit separators, smallest footprint first, within vertex capacities.

    Ties in footprint are broken by the lexicographically smallest sorted
    member tuple. With ``isolated`` a separator is also refused when one of
    its vertices neighbours an admitted separator, so admitted separators
    are only ever joined through residual vertices.
    """
    capacities = graph.capacities
    adjacency = graph.adjacency
    packed = SeparatorPool(level=pool.level)
    for sep in sorted(pool, key=lambda s: (s.footprint, s.sorted_members)):
        usage = packed.usage
        if not all(usage[v] + 1 <= capacities[v] for v in sep.members):
            continue
        if isolated and any(usage[u] for v in sep.members for u in adjacency[v]):
            continue
        packed.add(sep)
    return packed


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------
def iter_start_batches(
    num_vertices: int,
    usage: Mapping[int, int],
    rng: np.random.Generator,
    batch_size: int,
) -> Iterator[list[int]]:
    """Yield batches of start vertices in a seeded random visiting order.

    Vertex ``v`` is kept with probability ``2 ** -usage[v]``, where ``usage``
    is read when ``v`` is visited. The caller may grow ``usage`` between
    batches so that later starts are suppressed by earlier results. Exactly
    one random draw is made per vertex.
    """
    if batch_size < 1:
        raise ContractViolation(f"batch_size must be >= 1, got {batch_size}")
    order = rng.permutation(num_vertices).tolist()
    batch: list[int] = []
    for v in order:
        draw = rng.random()
        if draw < 2.0 ** -usage.get(v, 0):
            batch.append(v)
            if len(batch) == batch_size:
                yield batch
                batch = []
    if batch:
        yield batch


def sample_start_vertices(
    graph: EmbeddedGraph,
    pool: SeparatorPool,
    rng: np.random.Generator,
) -> list[int]:
    """All start vertices for the pool as it stands now, in visiting order."""
    return [
        v
        for batch in iter_start_batches(graph.num_vertices, pool.usage, rng, max(graph.num_vertices, 1))
        for v in batch
    ]


# ---------------------------------------------------------------------------
# Orchestration
# ---------------------------------------------------------------------------
def _search_and_shrink(
    graph: EmbeddedGraph,
    level: int,
    alpha: int,
    connectivity: ConnectivityFactory,
    dyncon_threshold: int | None,
    v0: int,
) -> Separator | None:
    found = restricted_separator_search(
        graph, v0, alpha,
        level=level,
        connectivity=connectivity,
        dyncon_threshold=dyncon_threshold,
    )
    if found is None:
        return None
    return shrink_separator(graph, found)


def multilevel_skeletonize(
    graph: EmbeddedGraph,
    alpha: int | None = None,
    config: RunConfig | None = None,
    connectivity: ConnectivityFactory = DynamicConnectivity,
    clock: Callable[[], float] = time.perf_counter,
) -> MultilevelResult:
    """Compute the curve skeleton of ``graph``.

    With ``config.baseline`` the graph is not coarsened and every search
    runs unrestricted (budget = vertex count) on the input level only.
    """
    config = config or RunConfig()
    alpha = config.alpha if alpha is None else alpha
    if alpha < 1:
        raise ContractViolation(f"alpha must be >= 1, got {alpha}")
    if graph.num_vertices == 0:
        raise EmptyInputError("Cannot skeletonize an empty graph")

    rng = np.random.default_rng(config.seed)
    timings = dict.fromkeys(("coarsen", "search", "project", "pack", "extract", "total"), 0.0)
    started = clock()

    if config.baseline:
        hierarchy = LevelHierarchy(graphs=(graph,), records=())
        search_alpha = graph.num_vertices
    else:
        hierarchy = build_hierarchy(graph, alpha, rng, max_rounds=config.max_rounds)
        search_alpha = alpha
        timings["coarsen"] = clock() - started

    top = hierarchy.num_levels - 1
    levels: list[LevelStats] = []
    pool = SeparatorPool(level=top)

    with ThreadPoolExecutor(max_workers=config.threads) as search_pool, \
            ThreadPoolExecutor(max_workers=min(2, config.threads)) as project_pool:
        for level in range(top, -1, -1):
            level_graph = hierarchy.graphs[level]
            stats = LevelStats(level, level_graph.num_vertices, level_graph.num_edges)

            if level < top:
                mark = clock()
                record = hierarchy.records[level]
                projected = [project_separator(record, sep) for sep in pool]
                refined = list(project_pool.map(
                    partial(refine_separator, level_graph, mode=config.refine_mode),
                    projected,
                ))
                survivors = [sep for sep in refined if sep is not None]
                stats.projected = len(projected)
                stats.refine_failures = len(projected) - len(survivors)
                pool = SeparatorPool.from_separators(level, survivors)
                timings["project"] += clock() - mark
            else:
                pool = SeparatorPool(level=level)

            mark = clock()
            search = partial(
                _search_and_shrink, level_graph, level, search_alpha,
                connectivity, config.dyncon_threshold,
            )
            for batch in iter_start_batches(level_graph.num_vertices, pool.usage, rng, config.batch_size):
                stats.sampled += len(batch)
                # map() yields in submission order, so merges follow sample order
                for sep in search_pool.map(search, batch):
                    if sep is not None:
                        stats.found += 1
                        pool.add(sep)
            timings["search"] += clock() - mark

            mark = clock()
            pool = dedup_filter(pool)
            stats.deduped = len(pool)
            # touching separators on the input graph would close spurious cycles
            pool = capacity_pack(level_graph, pool, isolated=level == 0)
            stats.packed = len(pool)
            timings["pack"] += clock() - mark

            levels.append(stats)
            logger.info(
                "Level %s: vertices=%s sampled=%s found=%s projected=%s refine_failures=%s packed=%s",
                level, stats.vertices, stats.sampled, stats.found,
                stats.projected, stats.refine_failures, stats.packed,
            )

    mark = clock()
    skeleton = extract_skeleton(graph, pool.separators)
    timings["extract"] = clock() - mark
    timings["total"] = clock() - started

    return MultilevelResult(
        skeleton=skeleton,
        separators=tuple(pool.separators),
        levels=levels,
        timings=timings,
        num_levels=hierarchy.num_levels,
        stalled=hierarchy.stalled,
    )
