"""Iterated logarithms ``ell_j`` and their running products ``Lambda_k``.

    ell_0(x) = x,  ell_j(x) = 1 + log ell_{j-1}(x)   (j >= 1)
    Lambda_0(x) = 1,  Lambda_k(x) = Lambda_{k-1}(x) * ell_{k-1}(x)

Natural logarithms throughout; every argument must be at least 1.  Both
functions accept scalars or numpy arrays.  ``weight_table`` memoizes the
values at the integer lengths ``1..D`` used by the sphere computations.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


class WeightDomainError(ValueError):
    pass


def _check(x):
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr >= 1.0)):
        raise WeightDomainError(f"weights need x >= 1, got {x!r}")
    return arr


def _check_index(j: int, name: str) -> int:
    if int(j) != j or j < 0:
        raise WeightDomainError(f"{name} must be a non-negative integer, got {j!r}")
    return int(j)


def _ell(j: int, x):
    out = x
    for _ in range(j):
        out = 1.0 + np.log(out)
    return out


def ell(j: int, x):
    j = _check_index(j, "j")
    arr = _check(x)
    out = _ell(j, arr)
    return float(out) if np.ndim(out) == 0 else out


def Lambda(k: int, x):
    k = _check_index(k, "k")
    arr = _check(x)
    out = np.ones_like(arr)
    level = arr
    for _ in range(k):
        out = out * level
        level = 1.0 + np.log(level)
    return float(out) if np.ndim(out) == 0 else out


def ell_and_Lambda(kmax: int, x) -> tuple[list[float], list[float]]:
    """``([ell_0..ell_kmax], [Lambda_0..Lambda_kmax])`` at a single point."""
    kmax = _check_index(kmax, "kmax")
    x = float(_check(x))
    ells, lams = [x], [1.0]
    for _ in range(kmax):
        lams.append(lams[-1] * ells[-1])
        ells.append(1.0 + np.log(ells[-1]))
    return ells, lams


@lru_cache(maxsize=256)
def weight_table(kind: str, k: int, depth: int) -> np.ndarray:
    """Read-only array ``w[j]`` for ``j = 0..depth``; ``w[0]`` is NaN.

    ``kind`` is ``"ell"`` or ``"Lambda"``.  Index 0 is left undefined because
    the root is never weighted and ``log 0`` has no value.
    """
    j = np.arange(1, depth + 1, dtype=float)
    if kind == "ell":
        vals = _ell(k, j)
    elif kind == "Lambda":
        vals = Lambda(k, j)
    else:
        raise ValueError(f"unknown weight kind {kind!r}")
    out = np.concatenate([[np.nan], np.atleast_1d(vals)])
    out.setflags(write=False)
    return out
