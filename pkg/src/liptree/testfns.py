"""The extremal test functions used in the boundedness, compactness and
isometry arguments.

    chi_v                        indicator of {v}
    f_v   = chi_v / Lambda_m(|v|+1)
    g     = ell_m(|v|) off the root, 0 at the root
    g_k   = chi_{v_k^-} / Lambda_m(|v_k|)
    h_k   = 0 for |w| <= 1,
            ell_m(|w|)^2 / ell_m(|v_k|) for 2 <= |w| < |v_k| - 1,
            ell_m(|v_k|) for |w| >= |v_k| - 1
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .spaces import TreeFunction
from .tree import TreeError, TreeTruncation, VertexId, VertexOutOfRangeError
from .weights import Lambda, ell, weight_table

KINDS = ("chi", "f_v", "g_radial", "g_k", "h_k", "half_chi_o", "one")


class TestFunctionError(TreeError):
    __test__ = False  # keep pytest from collecting this


def make_chi(v: Sequence[int], t: TreeTruncation) -> TreeFunction:
    if not t.contains(v):
        raise VertexOutOfRangeError(f"vertex {VertexId(v)} is not in {t!r}")
    vals = np.zeros(t.n_vertices, dtype=complex)
    vals[t.index(v)] = 1.0
    return TreeFunction(t, vals)


def make_fv(v: Sequence[int], m: int, t: TreeTruncation) -> TreeFunction:
    v = VertexId(v)
    if v.is_root:
        raise TestFunctionError("f_v is defined for v != o")
    if len(v) > t.depth - 1:
        raise TestFunctionError(f"f_v needs the children of {v}, which lie beyond depth {t.depth}")
    return make_chi(v, t) / Lambda(m, len(v) + 1)


def make_g_radial(m: int, t: TreeTruncation) -> TreeFunction:
    prof = np.array(weight_table("ell", m, t.depth))
    prof[0] = 0.0
    return TreeFunction.radial(t, prof)


def make_gk(vk: Sequence[int], m: int, t: TreeTruncation) -> TreeFunction:
    vk = VertexId(vk)
    if vk.is_root:
        raise TestFunctionError("g_k needs |v_k| >= 1")
    return make_chi(vk.parent(), t) / Lambda(m, len(vk))


def hk_profile(depth_vk: int, m: int, depth: int) -> np.ndarray:
    """Per-level values of ``h_k`` on lengths ``0..depth``."""
    if depth_vk <= 3:
        raise TestFunctionError(f"h_k needs |v_k| > 3, got {depth_vk}")
    top = ell(m, depth_vk)
    prof = np.empty(depth + 1)
    for j in range(depth + 1):
        if j <= 1:
            prof[j] = 0.0
        elif j < depth_vk - 1:
            prof[j] = ell(m, j) ** 2 / top
        else:
            prof[j] = top
    return prof


def make_hk(vk: Sequence[int], m: int, t: TreeTruncation) -> TreeFunction:
    vk = VertexId(vk)
    if len(vk) > t.depth:
        raise VertexOutOfRangeError(f"v_k = {vk} is deeper than {t.depth}")
    return TreeFunction.radial(t, hk_profile(len(vk), m, t.depth))


def half_chi_o(t: TreeTruncation) -> TreeFunction:
    return make_chi(VertexId(), t) * 0.5


def one(t: TreeTruncation) -> TreeFunction:
    return TreeFunction.constant(t, 1.0)


def make(kind: str, t: TreeTruncation, vertex: Sequence[int] | None = None, m: int = 0) -> TreeFunction:
    """Dispatch by kind name (see ``KINDS``)."""
    needs_vertex = kind in ("chi", "f_v", "g_k", "h_k")
    if needs_vertex and vertex is None:
        raise TestFunctionError(f"test function {kind!r} needs a vertex")
    if kind == "chi":
        return make_chi(vertex, t)
    if kind == "f_v":
        return make_fv(vertex, m, t)
    if kind == "g_radial":
        return make_g_radial(m, t)
    if kind == "g_k":
        return make_gk(vertex, m, t)
    if kind == "h_k":
        return make_hk(vertex, m, t)
    if kind == "half_chi_o":
        return half_chi_o(t)
    if kind == "one":
        return one(t)
    raise TestFunctionError(f"unknown test function kind {kind!r}; choose from {', '.join(KINDS)}")
