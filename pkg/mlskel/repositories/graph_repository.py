"""Native graph interchange format.

    graph <n> <m>
    x y z capacity      (n lines)
    u v                 (m lines)
"""

from __future__ import annotations

import numpy as np

from mlskel.domain.exceptions import ParseError
from mlskel.domain.graph import EmbeddedGraph
from mlskel.repositories.base import BaseRepository


class GraphRepository(BaseRepository[EmbeddedGraph]):
    """Reads and writes ``EmbeddedGraph`` in the native ASCII format."""

    formats = {"graph": ("graph", "txt")}
    writable = ("graph",)

    def _parse_graph(self, data: bytes, source: str | None) -> EmbeddedGraph:
        records = self._iter_records(data)
        try:
            line_no, header = next(records)
        except StopIteration:
            raise ParseError("Missing 'graph <n> <m>' header", source, line=1) from None
        if len(header) != 3 or header[0] != "graph":
            raise ParseError("Expected header 'graph <n> <m>'", source, line=line_no)
        n = self._to_int(header[1], source, line_no)
        m = self._to_int(header[2], source, line_no)
        if n < 0 or m < 0:
            raise ParseError("Vertex and edge counts must be non-negative", source, line=line_no)

        positions = np.zeros((n, 3), dtype=np.float64)
        capacities = np.ones(n, dtype=np.int64)
        edges = np.zeros((m, 2), dtype=np.int64)
        for i in range(n + m):
            try:
                line_no, tokens = next(records)
            except StopIteration:
                raise ParseError(
                    f"Expected {n} vertex and {m} edge lines, file ended after {i}", source,
                ) from None
            if i < n:
                if len(tokens) != 4:
                    raise ParseError("Vertex line must be 'x y z capacity'", source, line=line_no)
                positions[i] = [self._to_float(t, source, line_no) for t in tokens[:3]]
                capacities[i] = self._to_int(tokens[3], source, line_no)
                if capacities[i] < 1:
                    raise ParseError("Capacity must be >= 1", source, line=line_no)
            else:
                if len(tokens) != 2:
                    raise ParseError("Edge line must be 'u v'", source, line=line_no)
                u, v = (self._to_int(t, source, line_no) for t in tokens)
                if not (0 <= u < n and 0 <= v < n):
                    raise ParseError(f"Edge ({u}, {v}) out of range", source, line=line_no)
                edges[i - n] = (u, v)

        extra = next(records, None)
        if extra is not None:
            raise ParseError("Trailing content after the declared edges", source, line=extra[0])
        return EmbeddedGraph.from_edges(positions, edges, capacities)

    def _serialize_graph(self, graph: EmbeddedGraph) -> bytes:
        edges = graph.edges()
        fmt = self._format_float
        lines = [f"graph {graph.num_vertices} {edges.shape[0]}"]
        for (x, y, z), cap in zip(graph.positions.tolist(), graph.capacities.tolist()):
            lines.append(f"{fmt(x)} {fmt(y)} {fmt(z)} {cap}")
        lines.extend(f"{u} {v}" for u, v in edges.tolist())
        return ("\n".join(lines) + "\n").encode("ascii")


def load_graph(path, fmt: str | None = None) -> EmbeddedGraph:
    return GraphRepository().load(path, fmt)
