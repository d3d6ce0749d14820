"""Functions on a truncation, discrete derivatives and the ``L^(k)`` norms.

    f'(o) = 0,   f'(v) = f(v) - f(v^-)
    ||f||_k = |f(o)| + max_{1 <= |v| <= D} |f'(v)| Lambda_k(|v|)

A norm computed here is always the norm of the restriction to ``T_D``; the
reports carry ``D`` so that depth dependence stays visible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .tree import TreeTruncation, VertexId
from .weights import weight_table


class TreeFunction:
    """Complex values on every vertex of a truncation.

    Radial functions (constant on spheres) keep only their per-level profile
    and materialize the full breadth-first array lazily.
    """

    def __init__(self, tree: TreeTruncation, values=None, *, profile=None):
        if (values is None) == (profile is None):
            raise ValueError("give exactly one of values or profile")
        self.tree = tree
        if profile is not None:
            profile = np.array(profile, dtype=complex)
            if profile.shape != (tree.depth + 1,):
                raise ValueError(
                    f"radial profile needs {tree.depth + 1} entries, got {profile.shape}"
                )
            profile.setflags(write=False)
            self._values = None
        else:
            values = np.array(values, dtype=complex)
            if values.shape != (tree.n_vertices,):
                raise ValueError(f"need {tree.n_vertices} values, got {values.shape}")
            values.setflags(write=False)
            self._values = values
        self.profile = profile

    @classmethod
    def radial(cls, tree: TreeTruncation, profile) -> "TreeFunction":
        return cls(tree, profile=profile)

    @classmethod
    def constant(cls, tree: TreeTruncation, c: complex = 1.0) -> "TreeFunction":
        return cls(tree, profile=np.full(tree.depth + 1, c, dtype=complex))

    @property
    def is_radial(self) -> bool:
        return self.profile is not None

    @property
    def values(self) -> np.ndarray:
        if self._values is None:
            vals = self.profile[self.tree.depth_of]
            vals.setflags(write=False)
            self._values = vals
        return self._values

    @property
    def root_value(self) -> complex:
        return complex(self.profile[0] if self.is_radial else self._values[0])

    def __call__(self, v: Sequence[int]) -> complex:
        if self.is_radial:
            if not self.tree.contains(v):
                self.tree.index(v)  # raises with a useful message
            return complex(self.profile[len(v)])
        return complex(self._values[self.tree.index(v)])

    def _combine(self, other, op) -> "TreeFunction":
        if isinstance(other, TreeFunction):
            if other.tree != self.tree:
                raise ValueError("functions live on different truncations")
            if self.is_radial and other.is_radial:
                return TreeFunction.radial(self.tree, op(self.profile, other.profile))
            return TreeFunction(self.tree, op(self.values, other.values))
        if self.is_radial:
            return TreeFunction.radial(self.tree, op(self.profile, other))
        return TreeFunction(self.tree, op(self.values, other))

    def __add__(self, other):
        return self._combine(other, np.add)

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __mul__(self, other):
        return self._combine(other, np.multiply)

    __rmul__ = __mul__
    __radd__ = __add__

    def __truediv__(self, c):
        return self._combine(c, np.true_divide)

    def __neg__(self):
        return self * -1.0

    def __repr__(self) -> str:
        kind = "radial" if self.is_radial else "explicit"
        return f"TreeFunction({kind}, {self.tree!r})"


def derivative(f: TreeFunction) -> TreeFunction:
    """Discrete derivative; zero at the root."""
    if f.is_radial:
        d = np.zeros_like(f.profile)
        d[1:] = np.diff(f.profile)
        return TreeFunction.radial(f.tree, d)
    vals = f.values
    d = np.empty_like(vals)
    d[0] = 0.0
    d[1:] = vals[1:] - vals[f.tree.parent_index[1:]]
    return TreeFunction(f.tree, d)


def integrate(tree: TreeTruncation, diffs, root_value: complex = 0.0) -> np.ndarray:
    """Rebuild values from derivative values by prefix sums along root paths.

    ``diffs`` may be a 1-d array over the vertices or a 2-d batch with one
    function per row; entry 0 (the root) is ignored.
    """
    diffs = np.asarray(diffs, dtype=complex)
    out = np.empty_like(diffs)
    out[..., 0] = root_value
    parents = tree.parent_index
    for j in range(1, tree.depth + 1):
        sl = tree.sphere_slice(j)
        out[..., sl] = out[..., parents[sl]] + diffs[..., sl]
    return out


@dataclass(frozen=True)
class NormReport:
    k: int
    depth: int
    root_abs: float
    seminorm: float
    total: float
    argmax: VertexId

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "depth": self.depth,
            "root_abs": self.root_abs,
            "seminorm": self.seminorm,
            "total": self.total,
            "argmax": str(self.argmax),
        }


def weighted_derivative(f: TreeFunction, k: int) -> np.ndarray:
    """``|f'(v)| Lambda_k(|v|)`` per level (radial) or per vertex; entry 0 is 0."""
    lam = weight_table("Lambda", k, f.tree.depth)
    d = np.abs(derivative(f).profile if f.is_radial else derivative(f).values)
    w = lam if f.is_radial else lam[f.tree.depth_of]
    out = d * np.where(np.isnan(w), 0.0, w)
    out[0] = 0.0
    return out


def norm_k(f: TreeFunction, k: int) -> NormReport:
    if k < 0:
        raise ValueError("k must be non-negative")
    terms = weighted_derivative(f, k)
    i = int(np.argmax(terms[1:])) + 1  # first maximizer in breadth-first order
    semi = float(terms[i])
    argmax = f.tree.first_vertex(i) if f.is_radial else f.tree.vertex(i)
    root = abs(f.root_value)
    return NormReport(k, f.tree.depth, root, semi, root + semi, argmax)


def norm(f: TreeFunction, k: int) -> float:
    return norm_k(f, k).total


def sup_norm(f: TreeFunction) -> float:
    return float(np.max(np.abs(f.profile if f.is_radial else f.values)))


def point_bound_factor(k: int, depth: int) -> np.ndarray:
    """Growth factor of point evaluation at lengths ``0..depth``.

    ``1 + |v|`` for ``k = 0`` and ``ell_k(|v|)`` otherwise; entry 0 is 1.
    """
    j = np.arange(depth + 1, dtype=float)
    if k == 0:
        return 1.0 + j
    out = np.array(weight_table("ell", k, depth))
    out[0] = 1.0
    return out


def check_point_bound(f: TreeFunction, k: int) -> float:
    """``min_{v != o} (bound(v) - |f(v)|)``; non-negative means the bound holds."""
    fk = norm(f, k)
    factor = point_bound_factor(k, f.tree.depth)
    if f.is_radial:
        slack = factor[1:] * fk - np.abs(f.profile[1:])
    else:
        mask = f.tree.depth_of > 0
        slack = factor[f.tree.depth_of[mask]] * fk - np.abs(f.values[mask])
    return float(np.min(slack))


def check_embedding_chain(f: TreeFunction, kmax: int) -> list[float]:
    """``[||f||_0, ..., ||f||_kmax]``; nondecreasing for every ``f``."""
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    return [norm(f, k) for k in range(kmax + 1)]
