"""Random search over the unit ball of ``L^(m)|T_D``.

Gives lower bounds for ``||M_psi||`` that are independent of the closed form
in :mod:`liptree.exact`.  Samples come from several families, each drawn
from its own Philox stream spawned from the seed, so the result depends only
on ``(seed, trials)``:

* ``dense``      random derivative moduli and phases, random ``|f(o)|``
* ``saturated``  every ``|f'(u)| Lambda_m(|u|)`` equal, random phases
* ``sparse``     random support for ``f'``
* ``interior_t`` single-path functions with ``0 < |f(o)| < 1`` and phases
                 aligned to the symbol; guards the endpoint reduction
* ``constant``   unimodular constants

plus every test function from :mod:`liptree.testfns`, normalized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import testfns
from .spaces import TreeFunction, integrate
from .symbols import as_function
from .tree import TreeTruncation
from .weights import weight_table

STRATEGIES = ("dense", "saturated", "sparse", "interior_t", "constant")
_CHUNK_ENTRIES = 2_000_000


def batch_norms(F: np.ndarray, k: int, t: TreeTruncation) -> np.ndarray:
    """``||f||_k`` for every row of ``F`` (functions in breadth-first order)."""
    parents = t.parent_index[1:]
    lam = weight_table("Lambda", k, t.depth)[t.depth_of[1:]]
    d = np.abs(F[:, 1:] - F[:, parents]) * lam
    return np.abs(F[:, 0]) + d.max(axis=1)


@dataclass
class SearchResult:
    best: float
    best_strategy: str
    by_strategy: dict[str, float] = field(default_factory=dict)
    samples: int = 0

    def as_dict(self) -> dict:
        return {
            "best": self.best,
            "best_strategy": self.best_strategy,
            "by_strategy": dict(self.by_strategy),
            "samples": self.samples,
        }


def _random_phases(rng, shape):
    return np.exp(2j * np.pi * rng.random(shape))


def _sample(strategy: str, rng, rows: int, psi_vals, m: int, t: TreeTruncation) -> np.ndarray:
    N = t.n_vertices
    inv_lam = np.zeros(N)
    inv_lam[1:] = 1.0 / weight_table("Lambda", m, t.depth)[t.depth_of[1:]]
    if strategy == "constant":
        return np.repeat(_random_phases(rng, (rows, 1)), N, axis=1)
    if strategy == "interior_t":
        return _interior_t(rng, rows, psi_vals, m, t)
    tmag = rng.random(rows)
    if strategy == "dense":
        r = rng.random((rows, N))
    elif strategy == "saturated":
        r = np.ones((rows, N))
    elif strategy == "sparse":
        density = rng.random((rows, 1)) ** 2
        r = (rng.random((rows, N)) < density) * np.where(rng.random((rows, 1)) < 0.5, 1.0, rng.random((rows, N)))
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    diffs = r * inv_lam * _random_phases(rng, (rows, N))
    diffs[:, 0] = 0.0
    # rescale the derivative part so that its weighted sup is exactly 1 - t
    sup = (np.abs(diffs) / np.where(inv_lam > 0, inv_lam, 1.0)).max(axis=1)
    scale = np.where(sup > 0, (1.0 - tmag) / np.where(sup > 0, sup, 1.0), 0.0)
    diffs *= scale[:, None]
    tmag = np.where(sup > 0, tmag, 1.0)
    root = tmag * _random_phases(rng, rows)
    return integrate(t, diffs, 0.0) + root[:, None]


def _interior_t(rng, rows, psi_vals, m, t):
    N = t.n_vertices
    lam_m = weight_table("Lambda", m, t.depth)
    parents = t.parent_index
    depth = t.depth_of
    v = rng.integers(1, N, size=rows)
    tmag = rng.uniform(1e-3, 1.0 - 1e-3, size=rows)
    dpsi = psi_vals[v] - psi_vals[parents[v]]

    def conj_phase(z):
        a = np.abs(z)
        return np.where(a > 0, np.conj(z) / np.where(a > 0, a, 1.0), 1.0)

    c_path = conj_phase(dpsi)
    c_last = conj_phase(psi_vals[v])
    diffs = np.zeros((rows, N), dtype=complex)
    rows_idx = np.arange(rows)
    diffs[rows_idx, v] = (1.0 - tmag) * c_last / lam_m[depth[v]]
    anc = parents[v]
    while True:
        active = depth[anc] >= 1
        if not active.any():
            break
        r, a = rows_idx[active], anc[active]
        diffs[r, a] = (1.0 - tmag[active]) * c_path[active] / lam_m[depth[a]]
        anc = np.where(active, parents[np.where(active, anc, 0)], anc)
    root = tmag * c_path
    return integrate(t, diffs, 0.0) + root[:, None]


def test_function_candidates(m: int, t: TreeTruncation, limit: int = 2048) -> list[TreeFunction]:
    """All constructed test functions; they are normalized when scored."""
    out = [testfns.one(t), testfns.half_chi_o(t), testfns.make_g_radial(m, t)]
    if t.n_vertices <= limit:
        verts = list(t.vertices())[1:]
    else:
        verts = [t.first_vertex(j) for j in range(1, t.depth + 1)]
    for v in verts:
        if len(v) <= t.depth - 1:
            out.append(testfns.make_fv(v, m, t))
        out.append(testfns.make_gk(v, m, t))
    for j in range(4, t.depth + 1):
        out.append(testfns.make_hk(t.first_vertex(j), m, t))
    return out


def _normalize_rows(F: np.ndarray, m: int, t: TreeTruncation) -> np.ndarray:
    nm = batch_norms(F, m, t)
    keep = nm > 0
    return F[keep] / nm[keep, None]


def random_search(
    psi,
    m: int,
    n: int,
    t: TreeTruncation,
    trials: int = 10_000,
    seed: int = 0,
    extra: Iterable[TreeFunction] = (),
    include_test_functions: bool = True,
) -> SearchResult:
    """Best ``||psi f||_n`` over sampled unit-norm ``f``.

    ``trials`` random samples are split evenly over ``STRATEGIES``.  Functions
    in ``extra`` (e.g. a witness) are normalized and evaluated as well.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    psi_vals = as_function(psi, t).values
    streams = np.random.SeedSequence(seed).spawn(len(STRATEGIES))
    per = [trials // len(STRATEGIES) + (i < trials % len(STRATEGIES)) for i in range(len(STRATEGIES))]
    chunk = max(1, _CHUNK_ENTRIES // t.n_vertices)
    result = SearchResult(best=0.0, best_strategy="none")

    def record(name, F):
        F = _normalize_rows(F, m, t)
        if not len(F):
            return
        vals = batch_norms(F * psi_vals, n, t)
        top = float(vals.max())
        result.samples += len(F)
        result.by_strategy[name] = max(result.by_strategy.get(name, 0.0), top)
        if top > result.best or result.best_strategy == "none":
            result.best, result.best_strategy = top, name

    for name, ss, count in zip(STRATEGIES, streams, per):
        rng = np.random.Generator(np.random.Philox(ss))
        done = 0
        while done < count:
            rows = min(chunk, count - done)
            record(name, _sample(name, rng, rows, psi_vals, m, t))
            done += rows
    groups = [("extra", list(extra))]
    if include_test_functions:
        groups.insert(0, ("test_functions", test_function_candidates(m, t)))
    for name, fixed in groups:
        for start in range(0, len(fixed), chunk):
            record(name, np.stack([f.values for f in fixed[start:start + chunk]]))
    return result


def random_search_lower_bound(psi, m: int, n: int, t: TreeTruncation, trials: int, seed: int, extra=()) -> float:
    return random_search(psi, m, n, t, trials, seed, extra).best
