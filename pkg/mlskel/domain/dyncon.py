"""Fully dynamic edge connectivity over a fixed vertex range.

Implements the levelled spanning-forest scheme (one Euler tour forest per
level, tree and non-tree edges carrying a level, replacement search on the
smaller tree). Euler tours live in treaps with implicit keys and parent
pointers; every tour node is augmented with its subtree size, vertex count and
the number of marked nodes below it so replacement candidates can be
enumerated without scanning whole tours.

``level_threshold`` caps the hierarchy: levels are only kept while trees at
that level may still hold more than ``level_threshold`` vertices. A threshold
of ``n`` or more leaves a single level, which is a plain augmented Euler tour
forest.
"""

from __future__ import annotations

import logging
import random
from collections import deque
from typing import Protocol

from mlskel.domain.exceptions import ContractViolation

logger = logging.getLogger(__name__)


class ConnectivityBackend(Protocol):
    """Interface shared by the dynamic structure and the recompute oracle."""

    n: int

    def connect(self, u: int, v: int) -> None: ...

    def remove(self, u: int, v: int) -> None: ...

    def connected(self, u: int, v: int) -> bool: ...

    def number_of_components(self) -> int: ...


# ---------------------------------------------------------------------------
# Treap primitives
# ---------------------------------------------------------------------------
class _TourNode:
    """One occurrence in an Euler tour: a vertex, or a directed arc of a tree edge."""

    __slots__ = (
        "priority", "left", "right", "parent",
        "vertex", "arc", "tree_mark", "nontree_mark",
        "size", "vertex_count", "tree_marks", "nontree_marks",
    )

    def __init__(self, priority: float, vertex: int | None = None, arc: tuple[int, int] | None = None):
        self.priority = priority
        self.left: _TourNode | None = None
        self.right: _TourNode | None = None
        self.parent: _TourNode | None = None
        self.vertex = vertex
        self.arc = arc
        self.tree_mark = False
        self.nontree_mark = False
        self.size = 1
        self.vertex_count = 1 if vertex is not None else 0
        self.tree_marks = 0
        self.nontree_marks = 0


def _size(node: _TourNode | None) -> int:
    return node.size if node is not None else 0


def _pull(node: _TourNode) -> None:
    size = 1
    vertex_count = 1 if node.vertex is not None else 0
    tree_marks = 1 if node.tree_mark else 0
    nontree_marks = 1 if node.nontree_mark else 0
    for child in (node.left, node.right):
        if child is not None:
            size += child.size
            vertex_count += child.vertex_count
            tree_marks += child.tree_marks
            nontree_marks += child.nontree_marks
    node.size = size
    node.vertex_count = vertex_count
    node.tree_marks = tree_marks
    node.nontree_marks = nontree_marks


def _merge(a: _TourNode | None, b: _TourNode | None) -> _TourNode | None:
    if a is None:
        return b
    if b is None:
        return a
    if a.priority > b.priority:
        a.right = _merge(a.right, b)
        a.right.parent = a
        _pull(a)
        return a
    b.left = _merge(a, b.left)
    b.left.parent = b
    _pull(b)
    return b


def _split(node: _TourNode | None, k: int) -> tuple[_TourNode | None, _TourNode | None]:
    if node is None:
        return None, None
    if _size(node.left) >= k:
        first, rest = _split(node.left, k)
        node.left = rest
        if rest is not None:
            rest.parent = node
        _pull(node)
        return first, node
    first, rest = _split(node.right, k - _size(node.left) - 1)
    node.right = first
    if first is not None:
        first.parent = node
    _pull(node)
    return node, rest


def _split_at(root: _TourNode | None, k: int) -> tuple[_TourNode | None, _TourNode | None]:
    """Split a tour into its first ``k`` nodes and the remainder."""
    first, rest = _split(root, k)
    if first is not None:
        first.parent = None
    if rest is not None:
        rest.parent = None
    return first, rest


def _join(*roots: _TourNode | None) -> _TourNode | None:
    out = None
    for root in roots:
        out = _merge(out, root)
    if out is not None:
        out.parent = None
    return out


def _root(node: _TourNode) -> _TourNode:
    while node.parent is not None:
        node = node.parent
    return node


def _index(node: _TourNode) -> int:
    idx = _size(node.left)
    while node.parent is not None:
        if node is node.parent.right:
            idx += _size(node.parent.left) + 1
        node = node.parent
    return idx


def _refresh(node: _TourNode | None) -> None:
    while node is not None:
        _pull(node)
        node = node.parent


def _collect(root: _TourNode | None, count_attr: str, flag_attr: str) -> list[_TourNode]:
    out: list[_TourNode] = []
    stack = [root]
    while stack:
        node = stack.pop()
        if node is None or getattr(node, count_attr) == 0:
            continue
        if getattr(node, flag_attr):
            out.append(node)
        stack.append(node.right)
        stack.append(node.left)
    return out


# ---------------------------------------------------------------------------
# Euler tour forest (one per level)
# ---------------------------------------------------------------------------
class _EulerTourForest:
    """Spanning forest stored as Euler tours; vertex nodes are created lazily."""

    def __init__(self, rng: random.Random):
        self._rng = rng
        self._vertex_nodes: dict[int, _TourNode] = {}
        self._arc_nodes: dict[tuple[int, int], _TourNode] = {}

    def _vertex_node(self, v: int) -> _TourNode:
        node = self._vertex_nodes.get(v)
        if node is None:
            node = _TourNode(self._rng.random(), vertex=v)
            self._vertex_nodes[v] = node
        return node

    def root(self, v: int) -> _TourNode | None:
        node = self._vertex_nodes.get(v)
        return None if node is None else _root(node)

    def connected(self, u: int, v: int) -> bool:
        if u == v:
            return True
        ru = self.root(u)
        return ru is not None and ru is self.root(v)

    def tree_size(self, v: int) -> int:
        root = self.root(v)
        return 1 if root is None else root.vertex_count

    def _reroot(self, v: int) -> _TourNode:
        node = self._vertex_node(v)
        head, tail = _split_at(_root(node), _index(node))
        return _join(tail, head)

    def link(self, u: int, v: int) -> None:
        tour_u = self._reroot(u)
        tour_v = self._reroot(v)
        uv = _TourNode(self._rng.random(), arc=(u, v))
        vu = _TourNode(self._rng.random(), arc=(v, u))
        self._arc_nodes[(u, v)] = uv
        self._arc_nodes[(v, u)] = vu
        _join(tour_u, uv, tour_v, vu)

    def cut(self, u: int, v: int) -> None:
        first = self._arc_nodes.pop((u, v))
        second = self._arc_nodes.pop((v, u))
        i, j = _index(first), _index(second)
        if i > j:
            i, j = j, i
        head, rest = _split_at(_root(first), i)
        middle, tail = _split_at(rest, j - i + 1)
        # middle = arc + detached subtree + arc; drop both arcs
        _, inner = _split_at(middle, 1)
        _split_at(inner, _size(inner) - 1)
        _join(head, tail)

    def set_tree_mark(self, u: int, v: int, flag: bool) -> None:
        node = self._arc_nodes[(min(u, v), max(u, v))]
        if node.tree_mark != flag:
            node.tree_mark = flag
            _refresh(node)

    def set_nontree_mark(self, v: int, flag: bool) -> None:
        node = self._vertex_node(v)
        if node.nontree_mark != flag:
            node.nontree_mark = flag
            _refresh(node)

    def marked_arcs(self, v: int) -> list[tuple[int, int]]:
        """Tree edges whose level equals this forest's level, in v's tree."""
        return [node.arc for node in _collect(self.root(v), "tree_marks", "tree_mark")]

    def marked_vertices(self, v: int) -> list[int]:
        """Vertices of v's tree with non-tree edges at this forest's level."""
        return [node.vertex for node in _collect(self.root(v), "nontree_marks", "nontree_mark")]


# ---------------------------------------------------------------------------
# Public structure
# ---------------------------------------------------------------------------
def _edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class DynamicConnectivity:
    """Edge insertions, deletions and connectivity queries on ``n`` vertices.

    Args:
        n: Number of vertices, fixed for the lifetime of the structure.
        level_threshold: Tree size at which the level hierarchy stops;
            defaults to ``n`` (single level).
        seed: Seed for treap priorities; answers never depend on it.
    """

    def __init__(self, n: int, level_threshold: int | None = None, seed: int = 0):
        if n < 0:
            raise ContractViolation(f"Vertex count must be >= 0, got {n}")
        self.n = n
        threshold = n if level_threshold is None else level_threshold
        if threshold < 0:
            raise ContractViolation(f"level_threshold must be >= 0, got {threshold}")
        self.level_threshold = threshold

        top = 0
        while (n >> top) > max(threshold, 1):
            top += 1
        self.top_level = top

        rng = random.Random(seed)
        self._forests = [_EulerTourForest(rng) for _ in range(top + 1)]
        self._nontree: list[dict[int, set[int]]] = [{} for _ in range(top + 1)]
        self._levels: dict[tuple[int, int], int] = {}
        self._tree_edges: set[tuple[int, int]] = set()

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------
    def number_of_components(self) -> int:
        return self.n - len(self._tree_edges)

    def connected(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return self._forests[0].connected(u, v)

    def has_edge(self, u: int, v: int) -> bool:
        return _edge_key(u, v) in self._levels

    @property
    def edge_count(self) -> int:
        return len(self._levels)

    # ------------------------------------------------------------------
    # Updates
    # ------------------------------------------------------------------
    def connect(self, u: int, v: int) -> None:
        """Insert edge ``(u, v)``; inserting a present edge is a no-op."""
        self._check_pair(u, v)
        key = _edge_key(u, v)
        if key in self._levels:
            return
        self._levels[key] = 0
        forest = self._forests[0]
        if forest.connected(u, v):
            self._add_nontree(u, v, 0)
            return
        self._tree_edges.add(key)
        forest.link(u, v)
        forest.set_tree_mark(u, v, True)

    def remove(self, u: int, v: int) -> None:
        """Delete edge ``(u, v)``, promoting a replacement edge if one exists."""
        self._check_pair(u, v)
        key = _edge_key(u, v)
        level = self._levels.pop(key, None)
        if level is None:
            raise ContractViolation(f"Edge ({u}, {v}) is not present")

        if key not in self._tree_edges:
            self._drop_nontree(u, v, level)
            return

        self._tree_edges.remove(key)
        for i in range(level + 1):
            self._forests[i].cut(u, v)
        for i in range(level, -1, -1):
            if self._reconnect(u, v, i):
                return

    # ------------------------------------------------------------------
    # Private helpers
    # ------------------------------------------------------------------
    def _reconnect(self, u: int, v: int, level: int) -> bool:
        """Search level ``level`` for an edge reconnecting the trees of u and v."""
        forest = self._forests[level]
        small = u if forest.tree_size(u) <= forest.tree_size(v) else v

        if level < self.top_level:
            upper = self._forests[level + 1]
            for a, b in forest.marked_arcs(small):
                forest.set_tree_mark(a, b, False)
                self._levels[_edge_key(a, b)] = level + 1
                upper.link(a, b)
                upper.set_tree_mark(a, b, True)

        small_root = forest.root(small)
        for x in forest.marked_vertices(small):
            for y in sorted(self._nontree[level].get(x, ())):
                if forest.root(y) is small_root:
                    if level < self.top_level:
                        self._drop_nontree(x, y, level)
                        self._add_nontree(x, y, level + 1)
                        self._levels[_edge_key(x, y)] = level + 1
                    continue

                self._drop_nontree(x, y, level)
                self._tree_edges.add(_edge_key(x, y))
                for i in range(level + 1):
                    self._forests[i].link(x, y)
                forest.set_tree_mark(x, y, True)
                return True
        return False

    def _add_nontree(self, u: int, v: int, level: int) -> None:
        adjacency = self._nontree[level]
        forest = self._forests[level]
        for a, b in ((u, v), (v, u)):
            adjacency.setdefault(a, set()).add(b)
            forest.set_nontree_mark(a, True)

    def _drop_nontree(self, u: int, v: int, level: int) -> None:
        adjacency = self._nontree[level]
        forest = self._forests[level]
        for a, b in ((u, v), (v, u)):
            nbrs = adjacency.get(a)
            if nbrs is None:
                continue
            nbrs.discard(b)
            if not nbrs:
                del adjacency[a]
                forest.set_nontree_mark(a, False)

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise ContractViolation(f"Vertex {v} out of range [0, {self.n})")

    def _check_pair(self, u: int, v: int) -> None:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise ContractViolation(f"Self-loop ({u}, {v}) is not allowed")


class RecomputedConnectivity:
    """Same interface as ``DynamicConnectivity``, answering by full traversal.

    Used as the ground-truth oracle and as the plain-traversal backend of the
    separator search.
    """

    def __init__(self, n: int, level_threshold: int | None = None, seed: int = 0):
        if n < 0:
            raise ContractViolation(f"Vertex count must be >= 0, got {n}")
        self.n = n
        self._adjacency: dict[int, set[int]] = {}

    def connect(self, u: int, v: int) -> None:
        self._check_pair(u, v)
        self._adjacency.setdefault(u, set()).add(v)
        self._adjacency.setdefault(v, set()).add(u)

    def remove(self, u: int, v: int) -> None:
        self._check_pair(u, v)
        if v not in self._adjacency.get(u, ()):
            raise ContractViolation(f"Edge ({u}, {v}) is not present")
        self._adjacency[u].discard(v)
        self._adjacency[v].discard(u)

    def connected(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return u == v or v in self._reach(u)

    def number_of_components(self) -> int:
        seen: set[int] = set()
        merged = 0
        for start, nbrs in self._adjacency.items():
            if start in seen or not nbrs:
                continue
            reach = self._reach(start)
            seen |= reach
            merged += len(reach) - 1
        return self.n - merged

    def _reach(self, start: int) -> set[int]:
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in self._adjacency.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise ContractViolation(f"Vertex {v} out of range [0, {self.n})")

    def _check_pair(self, u: int, v: int) -> None:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise ContractViolation(f"Self-loop ({u}, {v}) is not allowed")
