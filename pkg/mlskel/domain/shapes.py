"""Synthetic closed meshes for tests and bench series.

Every generator returns ``(vertices, faces)`` as numpy arrays: vertices
``(n, 3)`` float64, faces ``(f, 3)`` int64 triangles with consistent winding.
"""

from __future__ import annotations

import math

import numpy as np
from skimage import measure

from mlskel.domain.exceptions import ContractViolation
from mlskel.domain.graph import EmbeddedGraph, connected_components


def torus_mesh(
    major_segments: int = 32,
    minor_segments: int = 16,
    major_radius: float = 3.0,
    minor_radius: float = 1.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Triangulated quad grid on a torus around the z axis (genus 1)."""
    if major_segments < 3 or minor_segments < 3:
        raise ContractViolation("A torus grid needs at least 3 segments each way")
    u = np.arange(major_segments) * (2 * math.pi / major_segments)
    v = np.arange(minor_segments) * (2 * math.pi / minor_segments)
    uu, vv = np.meshgrid(u, v, indexing="ij")
    ring = major_radius + minor_radius * np.cos(vv)
    vertices = np.stack(
        [ring * np.cos(uu), ring * np.sin(uu), minor_radius * np.sin(vv)],
        axis=-1,
    ).reshape(-1, 3)

    i, j = np.meshgrid(np.arange(major_segments), np.arange(minor_segments), indexing="ij")
    a = i * minor_segments + j
    b = ((i + 1) % major_segments) * minor_segments + j
    c = ((i + 1) % major_segments) * minor_segments + (j + 1) % minor_segments
    d = i * minor_segments + (j + 1) % minor_segments
    faces = np.concatenate(
        [np.stack([a, b, c], axis=-1).reshape(-1, 3), np.stack([a, c, d], axis=-1).reshape(-1, 3)],
    )
    return vertices, faces.astype(np.int64)


def uv_sphere_mesh(
    rings: int = 12,
    segments: int = 24,
    radius: float = 1.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Latitude/longitude sphere with a single vertex at each pole (genus 0)."""
    if rings < 2 or segments < 3:
        raise ContractViolation("A UV sphere needs rings >= 2 and segments >= 3")
    theta = np.arange(1, rings) * (math.pi / rings)
    phi = np.arange(segments) * (2 * math.pi / segments)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    body = np.stack(
        [np.sin(tt) * np.cos(pp), np.sin(tt) * np.sin(pp), np.cos(tt)],
        axis=-1,
    ).reshape(-1, 3)
    vertices = radius * np.concatenate([[[0.0, 0.0, 1.0]], body, [[0.0, 0.0, -1.0]]])

    north, south = 0, vertices.shape[0] - 1
    faces = []
    for s in range(segments):
        t = (s + 1) % segments
        faces.append((north, 1 + s, 1 + t))
        for r in range(rings - 2):
            a = 1 + r * segments + s
            b = 1 + r * segments + t
            c = 1 + (r + 1) * segments + t
            d = 1 + (r + 1) * segments + s
            faces.append((a, d, c))
            faces.append((a, c, b))
        last = 1 + (rings - 2) * segments
        faces.append((last + s, south, last + t))
    return vertices, np.asarray(faces, dtype=np.int64)


def double_torus_mesh(resolution: int = 64, thickness: float = 0.01) -> tuple[np.ndarray, np.ndarray]:
    """Genus-2 surface: iso-surface of a thickened figure-eight curve, via marching cubes."""
    if resolution < 16:
        raise ContractViolation("double_torus_mesh needs resolution >= 16")
    xs = np.linspace(-0.3, 2.3, resolution)
    ys = np.linspace(-0.9, 0.9, max(resolution * 2 // 3, 12))
    zs = np.linspace(-0.4, 0.4, max(resolution // 3, 8))
    x, y, z = np.meshgrid(xs, ys, zs, indexing="ij")
    field = (x * (x - 1) ** 2 * (x - 2) + y ** 2) ** 2 + z ** 2 - thickness

    spacing = (xs[1] - xs[0], ys[1] - ys[0], zs[1] - zs[0])
    vertices, faces, _normals, _values = measure.marching_cubes(field, level=0.0, spacing=spacing)
    vertices = vertices + np.array([xs[0], ys[0], zs[0]])
    return _drop_unused(vertices.astype(np.float64), faces.astype(np.int64))


def loop_subdivide(vertices: np.ndarray, faces: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split each triangle into four, placing new vertices at edge midpoints.

    Vertex count grows roughly fourfold; the surface itself is unchanged.
    """
    vertices = np.asarray(vertices, dtype=np.float64)
    faces = np.asarray(faces, dtype=np.int64).reshape(-1, 3)
    n = vertices.shape[0]

    half = np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]])
    keys = np.sort(half, axis=1)
    unique, inverse = np.unique(keys, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    midpoints = (vertices[unique[:, 0]] + vertices[unique[:, 1]]) / 2.0

    f = faces.shape[0]
    m01 = n + inverse[:f]
    m12 = n + inverse[f:2 * f]
    m20 = n + inverse[2 * f:]
    a, b, c = faces[:, 0], faces[:, 1], faces[:, 2]
    new_faces = np.concatenate([
        np.stack([a, m01, m20], axis=1),
        np.stack([m01, b, m12], axis=1),
        np.stack([m20, m12, c], axis=1),
        np.stack([m01, m12, m20], axis=1),
    ])
    return np.concatenate([vertices, midpoints]), new_faces


def euler_genus(vertices: np.ndarray, faces: np.ndarray) -> int:
    """Total genus of a closed orientable triangle mesh: sum over components of (2 - chi) / 2."""
    faces = np.asarray(faces, dtype=np.int64).reshape(-1, 3)
    graph = EmbeddedGraph.from_faces(vertices, faces)
    used = np.unique(faces)
    _, labels = connected_components(graph)
    components = int(np.unique(labels[used]).shape[0])
    chi = used.shape[0] - graph.num_edges + faces.shape[0]
    return (2 * components - chi) // 2


def _drop_unused(vertices: np.ndarray, faces: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    used, remap = np.unique(faces, return_inverse=True)
    return vertices[used], remap.reshape(faces.shape).astype(np.int64)
