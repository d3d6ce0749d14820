"""Finite truncations of infinite rooted trees.

Vertices are addressed by the path of child indices leading from the root
(the root is the empty path).  A truncation ``T_D`` keeps every vertex with
``|v| <= D`` and enumerates them breadth first, so that the enumeration of
``T_D`` is a prefix of the enumeration of ``T_{D+1}`` for the same shape.
Because every vertex of a given level has the same number of children, the
breadth-first index of a vertex is a mixed-radix number and every navigation
step is plain integer arithmetic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

DEFAULT_VERTEX_CAP = 10**7


class TreeError(ValueError):
    """Base class for invalid tree requests."""


class InvalidShapeError(TreeError):
    pass


class CapacityError(TreeError):
    pass


class RootHasNoParentError(TreeError):
    pass


class VertexOutOfRangeError(TreeError):
    pass


class VertexId(tuple):
    """A vertex, stored as its child-index path from the root.

    ``VertexId()`` is the root.  The string form joins the indices with
    ``/`` (``"0/1/0"``); the root prints as ``"o"``.
    """

    def __new__(cls, path: Iterable[int] = ()):
        path = tuple(int(i) for i in path)
        if any(i < 0 for i in path):
            raise ValueError(f"negative child index in path {path}")
        return super().__new__(cls, path)

    @property
    def depth(self) -> int:
        return len(self)

    @property
    def is_root(self) -> bool:
        return len(self) == 0

    def parent(self) -> "VertexId":
        if not self:
            raise RootHasNoParentError("the root has no parent")
        return VertexId(self[:-1])

    def child(self, i: int) -> "VertexId":
        return VertexId(self + (i,))

    @classmethod
    def parse(cls, text: str) -> "VertexId":
        text = text.strip()
        if text in ("", "o", "/"):
            return cls()
        try:
            return cls(int(p) for p in text.strip("/").split("/"))
        except ValueError:
            raise ValueError(f"malformed vertex path {text!r}") from None

    def __str__(self) -> str:
        return "/".join(map(str, self)) if self else "o"

    def __repr__(self) -> str:
        return f"VertexId({list(self)})"


ROOT = VertexId()


@dataclass(frozen=True)
class TreeShape:
    """Child counts per level.

    ``branching`` is either a single count used on every level or a sequence
    whose entry ``j`` is the number of children of each vertex of length
    ``j``.  A sequence shorter than the requested depth repeats its last
    entry.
    """

    branching: int | tuple[int, ...]

    def __post_init__(self):
        b = self.branching
        if isinstance(b, (list, tuple)):
            b = tuple(int(c) for c in b)
            if not b:
                raise InvalidShapeError("empty branching sequence")
            object.__setattr__(self, "branching", b)
            counts = b
        else:
            object.__setattr__(self, "branching", int(b))
            counts = (int(b),)
        if any(c < 1 for c in counts):
            raise InvalidShapeError(f"every level needs at least one child, got {counts}")

    @property
    def is_uniform(self) -> bool:
        return isinstance(self.branching, int)

    def child_count(self, level: int) -> int:
        if isinstance(self.branching, int):
            return self.branching
        return self.branching[min(level, len(self.branching) - 1)]

    def describe(self) -> int | list[int]:
        return self.branching if self.is_uniform else list(self.branching)


def vertex_count(shape: TreeShape, depth: int, stop_above: int | None = None) -> int:
    """Number of vertices with length at most ``depth``.

    Stops counting early once the total exceeds ``stop_above``.
    """
    total, size = 1, 1
    for j in range(depth):
        size *= shape.child_count(j)
        total += size
        if stop_above is not None and total > stop_above:
            break
    return total


def _cap_from_env() -> int:
    raw = os.environ.get("LIPTREE_VERTEX_CAP")
    return int(raw) if raw else DEFAULT_VERTEX_CAP


class TreeTruncation:
    """The vertices of a rooted tree of length at most ``depth``.

    Index arrays (depths, parents) are materialized on first use, so
    computations that only need per-level data never touch the full vertex
    set.
    """

    def __init__(self, shape: TreeShape, depth: int):
        self.shape = shape
        self.depth = int(depth)
        sizes = [1]
        for j in range(self.depth):
            sizes.append(sizes[-1] * shape.child_count(j))
        self.sphere_sizes: tuple[int, ...] = tuple(sizes)
        self.offsets: tuple[int, ...] = tuple(np.concatenate([[0], np.cumsum(sizes)]).tolist())
        self.n_vertices: int = self.offsets[-1]

    def __repr__(self) -> str:
        return f"TreeTruncation(branching={self.shape.describe()!r}, depth={self.depth})"

    def __len__(self) -> int:
        return self.n_vertices

    def __eq__(self, other) -> bool:
        if not isinstance(other, TreeTruncation):
            return NotImplemented
        return self.depth == other.depth and self.sphere_sizes == other.sphere_sizes

    def __hash__(self) -> int:
        return hash((self.depth, self.sphere_sizes))

    # -- index arrays -------------------------------------------------------

    @cached_property
    def depth_of(self) -> np.ndarray:
        """Length ``|v|`` of every vertex, in breadth-first order."""
        out = np.repeat(np.arange(self.depth + 1), self.sphere_sizes)
        out.setflags(write=False)
        return out

    @cached_property
    def parent_index(self) -> np.ndarray:
        """Breadth-first index of ``v^-``; ``-1`` for the root."""
        out = np.empty(self.n_vertices, dtype=np.int64)
        out[0] = -1
        for j in range(1, self.depth + 1):
            c = self.shape.child_count(j - 1)
            pos = np.arange(self.sphere_sizes[j])
            out[self.offsets[j]:self.offsets[j + 1]] = self.offsets[j - 1] + pos // c
        out.setflags(write=False)
        return out

    def sphere_slice(self, j: int) -> slice:
        if not 0 <= j <= self.depth:
            raise VertexOutOfRangeError(f"sphere {j} outside 0..{self.depth}")
        return slice(self.offsets[j], self.offsets[j + 1])

    # -- addressing ---------------------------------------------------------

    def contains(self, v: Sequence[int]) -> bool:
        if len(v) > self.depth:
            return False
        return all(0 <= c < self.shape.child_count(i) for i, c in enumerate(v))

    def index(self, v: Sequence[int]) -> int:
        if not self.contains(v):
            raise VertexOutOfRangeError(f"vertex {VertexId(v)} is not in {self!r}")
        pos = 0
        for i, c in enumerate(v):
            pos = pos * self.shape.child_count(i) + c
        return self.offsets[len(v)] + pos

    def vertex(self, index: int) -> VertexId:
        index = int(index)
        if not 0 <= index < self.n_vertices:
            raise VertexOutOfRangeError(f"index {index} outside 0..{self.n_vertices - 1}")
        j = int(np.searchsorted(self.offsets, index, side="right")) - 1
        pos = index - self.offsets[j]
        path = []
        for level in range(j - 1, -1, -1):
            c = self.shape.child_count(level)
            pos, r = divmod(pos, c)
            path.append(r)
        return VertexId(reversed(path))

    def first_vertex(self, j: int) -> VertexId:
        return VertexId((0,) * j)

    def is_boundary(self, v: Sequence[int]) -> bool:
        """True for vertices at the cut depth, whose children were dropped."""
        return len(v) == self.depth

    def vertices(self) -> Iterable[VertexId]:
        for j in range(self.depth + 1):
            yield from sphere(self, j)


def build_truncation(
    shape: TreeShape | int | Sequence[int], depth: int, vertex_cap: int | None = None
) -> TreeTruncation:
    """Build ``T_depth`` for ``shape`` after checking the vertex budget.

    The budget defaults to ``LIPTREE_VERTEX_CAP`` or ``10**7``.
    """
    if not isinstance(shape, TreeShape):
        shape = TreeShape(tuple(shape) if isinstance(shape, (list, tuple)) else shape)
    depth = int(depth)
    if depth < 1:
        raise TreeError(f"depth must be at least 1, got {depth}")
    cap = _cap_from_env() if vertex_cap is None else int(vertex_cap)
    count = vertex_count(shape, depth, stop_above=cap)
    if count > cap:
        raise CapacityError(
            f"truncation at depth {depth} needs more than {cap} vertices; "
            "raise the cap or lower the depth"
        )
    return TreeTruncation(shape, depth)


def parent(v: VertexId) -> VertexId:
    return VertexId(v).parent()


def children(v: VertexId, t: TreeTruncation) -> tuple[VertexId, ...]:
    """Children of ``v`` inside ``t``; empty on the boundary sphere."""
    v = VertexId(v)
    if not t.contains(v):
        raise VertexOutOfRangeError(f"vertex {v} is not in {t!r}")
    if t.is_boundary(v):
        return ()
    return tuple(v.child(i) for i in range(t.shape.child_count(len(v))))


def sphere(t: TreeTruncation, j: int) -> list[VertexId]:
    """All vertices of length ``j`` in breadth-first order."""
    sl = t.sphere_slice(j)
    if j == 0:
        return [ROOT]
    radices = [t.shape.child_count(i) for i in range(j)]
    out = []
    for pos in range(sl.stop - sl.start):
        path = []
        for c in reversed(radices):
            pos, r = divmod(pos, c)
            path.append(r)
        out.append(VertexId(reversed(path)))
    return out


def distance(v: Sequence[int], w: Sequence[int]) -> int:
    """Edge distance; the path runs through the deepest common ancestor."""
    common = 0
    for a, b in zip(v, w):
        if a != b:
            break
        common += 1
    return len(v) + len(w) - 2 * common
