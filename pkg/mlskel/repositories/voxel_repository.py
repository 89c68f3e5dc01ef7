"""Voxel lists: one occupied integer cell ``x y z`` per line."""

from __future__ import annotations

import itertools

import numpy as np

from mlskel.domain.exceptions import ConfigError, ParseError
from mlskel.domain.graph import EmbeddedGraph
from mlskel.repositories.base import BaseRepository

CONNECTIVITIES = (6, 26)


def _half_offsets(connectivity: int) -> np.ndarray:
    """Neighbour offsets with the first non-zero component positive (each pair once)."""
    offsets = []
    for d in itertools.product((-1, 0, 1), repeat=3):
        if d == (0, 0, 0):
            continue
        if connectivity == 6 and sum(map(abs, d)) != 1:
            continue
        first = next(c for c in d if c != 0)
        if first > 0:
            offsets.append(d)
    return np.asarray(offsets, dtype=np.int64)


def voxel_graph(cells, connectivity: int = 26) -> EmbeddedGraph:
    """Graph with one vertex per distinct cell (first occurrence order) and neighbour edges."""
    if connectivity not in CONNECTIVITIES:
        raise ConfigError(f"Voxel connectivity must be one of {CONNECTIVITIES}, got {connectivity}")
    cells = np.asarray(cells, dtype=np.int64).reshape(-1, 3)
    if cells.shape[0] == 0:
        return EmbeddedGraph.empty()

    _, first = np.unique(cells, axis=0, return_index=True)
    cells = cells[np.sort(first)]

    lo = cells.min(axis=0) - 1
    extent = cells.max(axis=0) - lo + 2

    def encode(c):
        c = c - lo
        return (c[:, 0] * extent[1] + c[:, 1]) * extent[2] + c[:, 2]

    keys = encode(cells)
    order = np.argsort(keys)
    sorted_keys = keys[order]

    edges = []
    for offset in _half_offsets(connectivity):
        target = encode(cells + offset)
        pos = np.minimum(np.searchsorted(sorted_keys, target), len(sorted_keys) - 1)
        hit = sorted_keys[pos] == target
        edges.append(np.stack([np.flatnonzero(hit), order[pos[hit]]], axis=1))
    return EmbeddedGraph.from_edges(cells.astype(np.float64), np.concatenate(edges))


class VoxelRepository(BaseRepository[EmbeddedGraph]):
    """Reads voxel lists into graphs under 6- or 26-connectivity."""

    formats = {"voxels": ("vox", "voxels", "xyz")}

    def __init__(self, connectivity: int = 26):
        if connectivity not in CONNECTIVITIES:
            raise ConfigError(f"Voxel connectivity must be one of {CONNECTIVITIES}, got {connectivity}")
        self._connectivity = connectivity

    def _parse_voxels(self, data: bytes, source: str | None) -> EmbeddedGraph:
        cells = []
        for line_no, tokens in self._iter_records(data):
            if len(tokens) != 3:
                raise ParseError("Voxel line must be 'x y z'", source, line=line_no)
            cells.append([self._to_int(t, source, line_no) for t in tokens])
        return voxel_graph(cells, self._connectivity)


def load_voxels(path, connectivity: int = 26) -> EmbeddedGraph:
    return VoxelRepository(connectivity).load(path)
