"""Polygon mesh files: PLY (ascii, binary little endian) and Wavefront OBJ."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from mlskel.domain.exceptions import EmptyInputError, ParseError
from mlskel.domain.graph import EmbeddedGraph
from mlskel.repositories.base import BaseRepository
from mlskel.repositories.ply_format import column, read_ply

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MeshData:
    """Vertex positions and polygon faces (0-based corner indices)."""

    vertices: np.ndarray
    faces: tuple[tuple[int, ...], ...]

    @classmethod
    def from_arrays(cls, vertices, faces) -> MeshData:
        return cls(
            vertices=np.asarray(vertices, dtype=np.float64).reshape(-1, 3),
            faces=tuple(tuple(int(c) for c in face) for face in np.asarray(faces).tolist()),
        )

    def to_graph(self) -> EmbeddedGraph:
        return EmbeddedGraph.from_faces(self.vertices, self.faces)

    def triangles(self) -> np.ndarray:
        """Faces fan-triangulated from their first corner."""
        tris = [(f[0], a, b) for f in self.faces for a, b in zip(f[1:-1], f[2:])]
        return np.asarray(tris, dtype=np.int64).reshape(-1, 3)


class MeshRepository(BaseRepository[MeshData]):
    """Data access for triangle (or polygon) meshes."""

    formats = {"ply": ("ply",), "obj": ("obj",)}
    writable = ("ply", "obj")

    # ------------------------------------------------------------------
    # PLY
    # ------------------------------------------------------------------
    def _parse_ply(self, data: bytes, source: str | None) -> MeshData:
        header, body = read_ply(data, source)
        vertex = header.element("vertex")
        if vertex is None or vertex.count == 0:
            raise EmptyInputError("empty mesh")
        rows = body["vertex"]
        vertices = np.stack([column(rows, vertex, axis, source) for axis in "xyz"], axis=1)

        faces: list[tuple[int, ...]] = []
        face = header.element("face")
        if face is not None:
            names = face.property_names()
            key = next((k for k in ("vertex_indices", "vertex_index") if k in names), None)
            if key is None:
                raise ParseError("Face element has no vertex_indices list", source)
            idx = names.index(key)
            faces = [tuple(int(c) for c in row[idx]) for row in body["face"]]
        return self._checked(vertices, faces, source)

    def _serialize_ply(self, mesh: MeshData) -> bytes:
        fmt = self._format_float
        lines = [
            "ply",
            "format ascii 1.0",
            f"element vertex {mesh.vertices.shape[0]}",
            "property double x",
            "property double y",
            "property double z",
            f"element face {len(mesh.faces)}",
            "property list uchar int vertex_indices",
            "end_header",
        ]
        lines.extend(f"{fmt(x)} {fmt(y)} {fmt(z)}" for x, y, z in mesh.vertices.tolist())
        lines.extend(f"{len(f)} " + " ".join(str(c) for c in f) for f in mesh.faces)
        return ("\n".join(lines) + "\n").encode("ascii")

    # ------------------------------------------------------------------
    # OBJ
    # ------------------------------------------------------------------
    def _parse_obj(self, data: bytes, source: str | None) -> MeshData:
        vertices: list[list[float]] = []
        raw_faces: list[tuple[int, list[str]]] = []
        for line_no, tokens in self._iter_records(data):
            keyword = tokens[0]
            if keyword == "v":
                if len(tokens) < 4:
                    raise ParseError("Vertex record needs three coordinates", source, line=line_no)
                vertices.append([self._to_float(t, source, line_no) for t in tokens[1:4]])
            elif keyword == "f":
                if len(tokens) < 4:
                    raise ParseError("Face record needs at least three corners", source, line=line_no)
                raw_faces.append((line_no, tokens[1:]))

        if not vertices:
            raise EmptyInputError("empty mesh")
        n = len(vertices)
        faces = []
        for line_no, corners in raw_faces:
            face = []
            for corner in corners:
                index = self._to_int(corner.split("/", 1)[0], source, line_no)
                # OBJ indices are 1-based; negative ones count back from the last vertex
                face.append(index - 1 if index > 0 else n + index)
            faces.append(tuple(face))
        return self._checked(np.asarray(vertices, dtype=np.float64), faces, source)

    def _serialize_obj(self, mesh: MeshData) -> bytes:
        fmt = self._format_float
        lines = [f"v {fmt(x)} {fmt(y)} {fmt(z)}" for x, y, z in mesh.vertices.tolist()]
        lines.extend("f " + " ".join(str(c + 1) for c in f) for f in mesh.faces)
        return ("\n".join(lines) + "\n").encode("ascii")

    # ------------------------------------------------------------------
    @staticmethod
    def _checked(vertices: np.ndarray, faces: list[tuple[int, ...]], source) -> MeshData:
        n = vertices.shape[0]
        for i, face in enumerate(faces):
            if len(face) < 3:
                raise ParseError(f"Face {i} has fewer than three corners", source)
            if any(c < 0 or c >= n for c in face):
                raise ParseError(f"Face {i} references a vertex outside [0, {n})", source)
        logger.debug("Parsed mesh vertices=%s faces=%s", n, len(faces))
        return MeshData(vertices=vertices, faces=tuple(faces))


def load_mesh(path, fmt: str | None = None) -> EmbeddedGraph:
    """Mesh file to its 1-skeleton graph (all capacities 1)."""
    return MeshRepository().load(path, fmt).to_graph()
