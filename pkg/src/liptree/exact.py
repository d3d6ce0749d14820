"""Exact norm of ``M_psi : L^(m)|T_D -> L^(n)|T_D`` with an attaining witness.

For ``v != o`` the image derivative splits as

    (psi f)'(v) = psi'(v) f(v^-) + psi(v) f'(v),
    f(v^-) = f(o) + sum of f'(u) over the path vertices u with 1 <= |u| < |v|.

Write ``t = |f(o)|``.  On the unit ball every ``|f'(u)|`` is at most
``(1 - t) / Lambda_m(|u|)``, so the ``v`` term of ``||psi f||_n`` is at most

    g_v(t) = |psi(o)| t + Lambda_n(|v|) [ |psi'(v)| (t + (1 - t) P(|v|))
                                          + |psi(v)| (1 - t) / Lambda_m(|v|) ],
    P(j) = sum_{i=1}^{j-1} 1 / Lambda_m(i),

and this is attained by the function that is zero off the path to ``v``
(derivative zero there) and whose root value and path derivatives carry the
conjugate phases of ``psi'(v)`` (for ``f(o)`` and the path strictly above
``v``) and of ``psi(v)`` (for ``f'(v)``).  The norm is a maximum over ``v`` of
a supremum, the two maxima commute, and ``g_v`` is affine in ``t``, so

    ||M_psi|| = max over v in T_D \\ {o} and t in {0, 1} of g_v(t).

At ``t = 1`` the witness is the constant 1 and ``g_v(1)`` maximizes to
``||psi||_n``.  Because ``P`` only depends on ``|v|``, one vectorized pass
over the vertices (or over the levels, for radial symbols) suffices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spaces import TreeFunction, integrate, norm
from .symbols import as_function
from .tree import TreeTruncation, VertexId
from .weights import weight_table


@dataclass(frozen=True)
class NormSolution:
    value: float
    witness: TreeFunction
    vertex: VertexId
    t_star: int
    value_t0: float
    value_t1: float
    m: int
    n: int

    def as_dict(self, include_witness: bool = True) -> dict:
        out = {
            "m": self.m,
            "n": self.n,
            "depth": self.witness.tree.depth,
            "value": self.value,
            "vertex": str(self.vertex),
            "t_star": self.t_star,
            "value_t0": self.value_t0,
            "value_t1": self.value_t1,
        }
        if include_witness:
            w = self.witness
            if w.is_radial:
                out["witness"] = {"kind": "radial", "profile": [[z.real, z.imag] for z in w.profile]}
            else:
                out["witness"] = {"kind": "explicit", "values": [[z.real, z.imag] for z in w.values]}
        return out


def _phase_conj(z: complex) -> complex:
    """Unimodular ``c`` with ``z c = |z|``; 1 when ``z = 0``."""
    a = abs(z)
    return 1.0 if a == 0 else (z / a).conjugate()


def path_prefix(m: int, depth: int) -> np.ndarray:
    """``P[j] = sum_{i=1}^{j-1} 1/Lambda_m(i)`` for ``j = 0..depth``."""
    inv = 1.0 / weight_table("Lambda", m, depth)[1:]
    return np.concatenate([[0.0, 0.0], np.cumsum(inv)[:-1]])


def endpoint_values(psi, m: int, n: int, t: TreeTruncation):
    """``(g(0), g(1))`` per level (radial symbol) or per vertex; entry 0 is 0."""
    f = as_function(psi, t)
    D = t.depth
    lam_m = weight_table("Lambda", m, D)
    lam_n = weight_table("Lambda", n, D)
    P = path_prefix(m, D)
    if f.is_radial:
        vals = f.profile
        prev = np.concatenate([[0.0], vals[:-1]])
        idx = np.arange(D + 1)
    else:
        vals = f.values
        prev = np.concatenate([[0.0], vals[t.parent_index[1:]]])
        idx = t.depth_of
    dpsi = np.abs(vals - prev)
    apsi = np.abs(vals)
    with np.errstate(invalid="ignore"):
        g0 = lam_n[idx] * (dpsi * P[idx] + apsi / lam_m[idx])
        g1 = abs(f.root_value) + lam_n[idx] * dpsi
    g0[0] = g1[0] = 0.0
    return g0, g1


def exact_operator_norm(psi, m: int, n: int, t: TreeTruncation) -> NormSolution:
    f = as_function(psi, t)
    g0, g1 = endpoint_values(f, m, n, t)
    i0 = int(np.argmax(g0[1:])) + 1
    i1 = int(np.argmax(g1[1:])) + 1
    val0, val1 = float(g0[i0]), float(g1[i1])
    value = max(val0, val1)
    # prefer the constant witness on (numerical) ties
    t_star = 1 if val1 >= val0 - 1e-12 * max(1.0, value) else 0
    i = i1 if t_star else i0
    vertex = t.first_vertex(i) if f.is_radial else t.vertex(i)
    witness = _witness(f, m, t, vertex, t_star)
    return NormSolution(value, witness, vertex, t_star, val0, val1, m, n)


def _witness(f: TreeFunction, m: int, t: TreeTruncation, v: VertexId, t_star: int) -> TreeFunction:
    if t_star == 1:
        return TreeFunction.constant(t, 1.0)
    psi_v = f(v)
    dpsi_v = psi_v - f(v.parent())
    c_path = _phase_conj(dpsi_v)
    c_last = _phase_conj(psi_v)
    lam_m = weight_table("Lambda", m, t.depth)
    diffs = np.zeros(t.n_vertices, dtype=complex)
    for j in range(1, len(v)):
        diffs[t.index(v[:j])] = c_path / lam_m[j]
    diffs[t.index(v)] = c_last / lam_m[len(v)]
    return TreeFunction(t, integrate(t, diffs, 0.0))


def operator_image_norm(psi, f: TreeFunction, n: int) -> float:
    """``||psi f||_n`` for a symbol and a function on the same truncation."""
    return norm(as_function(psi, f.tree) * f, n)
