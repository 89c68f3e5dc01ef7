"""Skeleton files: PLY with vertex and edge elements, OBJ with ``l`` records, native graph."""

from __future__ import annotations

import numpy as np

from mlskel.domain.exceptions import EmptyInputError, ParseError
from mlskel.domain.graph import EmbeddedGraph
from mlskel.domain.skeleton import Skeleton
from mlskel.repositories.base import BaseRepository
from mlskel.repositories.graph_repository import GraphRepository
from mlskel.repositories.ply_format import column, read_ply


class SkeletonRepository(BaseRepository[Skeleton]):
    """Reads and writes curve skeletons. Output bytes depend only on the skeleton."""

    formats = {"ply": ("ply",), "obj": ("obj",), "graph": ("graph", "txt")}
    writable = ("ply", "obj", "graph")

    def __init__(self):
        self._graphs = GraphRepository()

    def load(self, path, fmt: str | None = None) -> Skeleton:
        skeleton = super().load(path, fmt)
        if skeleton.num_nodes == 0:
            raise EmptyInputError(f"Skeleton file {path} has no nodes")
        return skeleton

    # ------------------------------------------------------------------
    # PLY
    # ------------------------------------------------------------------
    def _parse_ply(self, data: bytes, source: str | None) -> Skeleton:
        header, body = read_ply(data, source)
        vertex = header.element("vertex")
        if vertex is None:
            raise ParseError("Skeleton PLY has no vertex element", source)
        rows = body["vertex"]
        positions = np.stack([column(rows, vertex, axis, source) for axis in "xyz"], axis=1) \
            if rows else np.zeros((0, 3))

        edges = np.zeros((0, 2), dtype=np.int64)
        edge = header.element("edge")
        if edge is not None and edge.count:
            a = column(body["edge"], edge, "vertex1", source)
            b = column(body["edge"], edge, "vertex2", source)
            edges = np.stack([a, b], axis=1).astype(np.int64)
        return self._wrap(positions, edges, source)

    def _serialize_ply(self, skeleton: Skeleton) -> bytes:
        fmt = self._format_float
        edges = skeleton.edges()
        lines = [
            "ply",
            "format ascii 1.0",
            f"element vertex {skeleton.num_nodes}",
            "property double x",
            "property double y",
            "property double z",
            f"element edge {edges.shape[0]}",
            "property int vertex1",
            "property int vertex2",
            "end_header",
        ]
        lines.extend(f"{fmt(x)} {fmt(y)} {fmt(z)}" for x, y, z in skeleton.positions.tolist())
        lines.extend(f"{u} {v}" for u, v in edges.tolist())
        return ("\n".join(lines) + "\n").encode("ascii")

    # ------------------------------------------------------------------
    # OBJ
    # ------------------------------------------------------------------
    def _parse_obj(self, data: bytes, source: str | None) -> Skeleton:
        positions: list[list[float]] = []
        lines: list[tuple[int, list[int]]] = []
        for line_no, tokens in self._iter_records(data):
            if tokens[0] == "v":
                if len(tokens) < 4:
                    raise ParseError("Vertex record needs three coordinates", source, line=line_no)
                positions.append([self._to_float(t, source, line_no) for t in tokens[1:4]])
            elif tokens[0] == "l":
                if len(tokens) < 3:
                    raise ParseError("Line record needs at least two vertices", source, line=line_no)
                lines.append((line_no, [self._to_int(t.split("/", 1)[0], source, line_no) for t in tokens[1:]]))

        n = len(positions)
        edges = []
        for line_no, polyline in lines:
            ids = [i - 1 if i > 0 else n + i for i in polyline]
            if any(i < 0 or i >= n for i in ids):
                raise ParseError("Line record references a missing vertex", source, line=line_no)
            edges.extend(zip(ids[:-1], ids[1:]))
        return self._wrap(np.asarray(positions, dtype=np.float64).reshape(-1, 3), edges, source)

    def _serialize_obj(self, skeleton: Skeleton) -> bytes:
        fmt = self._format_float
        out = [f"v {fmt(x)} {fmt(y)} {fmt(z)}" for x, y, z in skeleton.positions.tolist()]
        out.extend(f"l {u + 1} {v + 1}" for u, v in skeleton.edges().tolist())
        return ("\n".join(out) + "\n").encode("ascii")

    # ------------------------------------------------------------------
    # Native graph
    # ------------------------------------------------------------------
    def _parse_graph(self, data: bytes, source: str | None) -> Skeleton:
        return Skeleton.from_graph(self._graphs.parse(data, "graph", source))

    def _serialize_graph(self, skeleton: Skeleton) -> bytes:
        return self._graphs.serialize(skeleton.graph, "graph")

    @staticmethod
    def _wrap(positions: np.ndarray, edges, source) -> Skeleton:
        pairs = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        n = positions.shape[0]
        if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
            raise ParseError("Edge references a missing vertex", source)
        return Skeleton.from_graph(EmbeddedGraph.from_edges(positions, pairs))
