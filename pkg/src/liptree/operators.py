"""Multiplication operators ``M_psi : L^(m) -> L^(n)`` on a truncation.

Pointwise quantities, for ``v != o``::

    mu(v) = |psi'(v)| ell_m(|v|) Lambda_n(|v|)
    nu(v) = |psi(v^-)| Lambda_n(|v|) / Lambda_m(|v|)

Their suprema give the norm bounds for distinct indices, and the behaviour
of their per-depth maxima deep in the tree is the (heuristic) compactness
diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spaces import derivative, norm, sup_norm
from .symbols import as_function
from .testfns import half_chi_o
from .tree import TreeTruncation, VertexId
from .weights import weight_table

TAIL_CLASSES = ("vanishing", "bounded", "growing", "inconclusive")


@dataclass(frozen=True)
class MuNuProfile:
    """Pointwise ``mu``/``nu`` values and their per-depth maxima.

    ``mu`` and ``nu`` hold one entry per level when the symbol is radial
    and one entry per vertex otherwise; entry 0 (the root) is unused and
    set to 0.  The ``*_by_depth`` arrays run over depths ``1..D``.
    """

    m: int
    n: int
    tree: TreeTruncation
    radial: bool
    mu: np.ndarray
    nu: np.ndarray
    mu_by_depth: np.ndarray
    nu_by_depth: np.ndarray
    mu_sup: float
    nu_sup: float
    mu_argmax: VertexId
    nu_argmax: VertexId

    @property
    def depth(self) -> int:
        return self.tree.depth

    def mu_at(self, v) -> float:
        return float(self.mu[len(v)] if self.radial else self.mu[self.tree.index(v)])

    def nu_at(self, v) -> float:
        return float(self.nu[len(v)] if self.radial else self.nu[self.tree.index(v)])

    def as_dict(self) -> dict:
        return {
            "depths": list(range(1, self.depth + 1)),
            "mu_max": self.mu_by_depth.tolist(),
            "nu_max": self.nu_by_depth.tolist(),
            "mu_sup": self.mu_sup,
            "nu_sup": self.nu_sup,
            "mu_argmax": str(self.mu_argmax),
            "nu_argmax": str(self.nu_argmax),
        }


def _per_depth_max(tree: TreeTruncation, values: np.ndarray) -> np.ndarray:
    return np.array([values[tree.sphere_slice(j)].max() for j in range(1, tree.depth + 1)])


def _argmax_vertex(tree: TreeTruncation, values: np.ndarray, radial: bool) -> VertexId:
    i = int(np.argmax(values[1:])) + 1
    return tree.first_vertex(i) if radial else tree.vertex(i)


def mu_nu_profile(psi, m: int, n: int, t: TreeTruncation) -> MuNuProfile:
    f = as_function(psi, t)
    D = t.depth
    ell_m = weight_table("ell", m, D)
    lam_m = weight_table("Lambda", m, D)
    lam_n = weight_table("Lambda", n, D)
    if f.is_radial:
        dpsi = np.abs(derivative(f).profile)
        prev = np.abs(np.concatenate([[0.0], f.profile[:-1]]))
        w_mu, w_nu = ell_m * lam_n, lam_n / lam_m
    else:
        vals = f.values
        depth = t.depth_of
        dpsi = np.abs(derivative(f).values)
        prev = np.abs(np.concatenate([[0.0], vals[t.parent_index[1:]]]))
        w_mu, w_nu = (ell_m * lam_n)[depth], (lam_n / lam_m)[depth]
    mu = dpsi * w_mu
    nu = prev * w_nu
    mu[0] = nu[0] = 0.0
    if f.is_radial:
        mu_d, nu_d = mu[1:].copy(), nu[1:].copy()
    else:
        mu_d, nu_d = _per_depth_max(t, mu), _per_depth_max(t, nu)
    for a in (mu, nu, mu_d, nu_d):
        a.setflags(write=False)
    return MuNuProfile(
        m, n, t, f.is_radial, mu, nu, mu_d, nu_d,
        float(mu_d.max()), float(nu_d.max()),
        _argmax_vertex(t, mu, f.is_radial), _argmax_vertex(t, nu, f.is_radial),
    )


def bounds_distinct(psi, m: int, n: int, t: TreeTruncation, profile: MuNuProfile | None = None):
    """``(||psi||_n, |psi(o)| + mu + nu)`` for ``m != n``."""
    if m == n:
        raise ValueError("bounds_distinct needs m != n; use bounds_equal")
    f = as_function(psi, t)
    prof = profile or mu_nu_profile(f, m, n, t)
    lower = norm(f, n)
    upper = abs(f.root_value) + prof.mu_sup + prof.nu_sup
    return lower, upper


def bounds_equal(psi, k: int, t: TreeTruncation):
    """``(max(||psi||_k, ||psi||_inf), ||psi||_inf + max |psi'| Lambda_{k+1})``."""
    f = as_function(psi, t)
    sup = sup_norm(f)
    lower = max(norm(f, k), sup)
    upper = sup + (norm(f, k + 1) - abs(f.root_value))
    return lower, upper


# -- compactness diagnostics ---------------------------------------------------


@dataclass(frozen=True)
class TailConfig:
    """Thresholds for the finite-depth tail heuristic.

    A per-depth sequence is split into its first and last quarters (at least
    one level each).  ``vanishing``: the last quarter is nonincreasing and
    either lies below ``eps_tail`` or has decayed below ``1/band`` times the
    first-quarter maximum.  ``growing``: every last-quarter value exceeds
    ``band`` times the first-quarter maximum.  ``bounded``: the last quarter
    stays below ``band`` times the first-quarter maximum.  Anything else is
    ``inconclusive``.
    """

    eps_tail: float = 1e-3
    band: float = 1.5


def _nonincreasing(a: np.ndarray) -> bool:
    return bool(np.all(a[1:] <= a[:-1] * (1 + 1e-12) + 1e-300))


def classify_sequence(values, cfg: TailConfig = TailConfig()) -> str:
    a = np.asarray(values, dtype=float)
    q = max(1, len(a) // 4)
    first, last = a[:q], a[-q:]
    head = first.max()
    if _nonincreasing(last) and (last.max() < cfg.eps_tail or last.max() <= head / cfg.band):
        return "vanishing"
    if last.min() > cfg.band * head:
        return "growing"
    if last.max() <= cfg.band * head:
        return "bounded"
    return "inconclusive"


def _joint(mu: str, nu: str) -> str:
    if mu == nu == "vanishing":
        return "vanishing"
    if "growing" in (mu, nu):
        return "growing"
    if {mu, nu} <= {"vanishing", "bounded"}:
        return "bounded"
    return "inconclusive"


@dataclass(frozen=True)
class TailClassification:
    mu: str
    nu: str
    joint: str
    config: TailConfig = field(default_factory=TailConfig)

    def as_dict(self) -> dict:
        return {
            "mu": self.mu,
            "nu": self.nu,
            "joint": self.joint,
            "heuristic": True,
            "eps_tail": self.config.eps_tail,
            "band": self.config.band,
        }


def classify_tail(profile: MuNuProfile, cfg: TailConfig = TailConfig()) -> TailClassification:
    """Finite-depth stand-in for ``mu(v) -> 0`` and ``nu(v) -> 0``.

    This only inspects depths up to ``D`` and is a heuristic label, not a
    compactness decision.
    """
    mu = classify_sequence(profile.mu_by_depth, cfg)
    nu = classify_sequence(profile.nu_by_depth, cfg)
    return TailClassification(mu, nu, _joint(mu, nu), cfg)


# -- isometry defect -------------------------------------------------------------


@dataclass(frozen=True)
class IsometryReport:
    """``|‖M_psi f‖_n - ‖f‖_m|`` over the test set ``1``, ``chi_o/2`` and ``chi_w``.

    ``chi_by_depth[i]`` is the largest ``chi_w`` defect over ``|w| = i + 2``.
    """

    defect: float
    one: float
    half_chi_o: float
    chi_by_depth: np.ndarray
    chi_argmax: VertexId | None

    def chi_defect_at(self, depth: int) -> float:
        return float(self.chi_by_depth[depth - 2])

    def as_dict(self) -> dict:
        return {
            "defect": self.defect,
            "one": self.one,
            "half_chi_o": self.half_chi_o,
            "chi_by_depth": {str(j + 2): float(d) for j, d in enumerate(self.chi_by_depth)},
            "chi_argmax": None if self.chi_argmax is None else str(self.chi_argmax),
        }


def isometry_report(psi, m: int, n: int, t: TreeTruncation) -> IsometryReport:
    if m == n:
        raise ValueError("the isometry test concerns m != n")
    if t.depth < 3:
        raise ValueError("the isometry test needs depth >= 3")
    f = as_function(psi, t)
    d_one = abs(norm(f, n) - 1.0)
    # M_psi(chi_o / 2) = psi(o) chi_o / 2 and ||chi_o / 2||_m = 1
    d_half = abs(norm(f * half_chi_o(t), n) - 1.0)
    # For 1 <= |w| < D: ||chi_w||_k = Lambda_k(|w|+1), attained at the children of w,
    # and ||psi chi_w||_n = |psi(w)| Lambda_n(|w|+1).
    D = t.depth
    lam_m = weight_table("Lambda", m, D)
    lam_n = weight_table("Lambda", n, D)
    by_depth = []
    best, best_v = -1.0, None
    for j in range(2, D):
        if f.is_radial:
            d = abs(abs(f.profile[j]) * lam_n[j + 1] - lam_m[j + 1])
            i_local = 0
        else:
            sl = t.sphere_slice(j)
            defects = np.abs(np.abs(f.values[sl]) * lam_n[j + 1] - lam_m[j + 1])
            i_local = int(np.argmax(defects))
            d = float(defects[i_local])
        by_depth.append(d)
        if d > best:
            best = d
            best_v = t.first_vertex(j) if f.is_radial else t.vertex(t.offsets[j] + i_local)
    chi = np.array(by_depth)
    chi.setflags(write=False)
    return IsometryReport(max(d_one, d_half, best), d_one, d_half, chi, best_v)


def isometry_defect(psi, m: int, n: int, t: TreeTruncation) -> float:
    """Strictly positive output certifies ``M_psi`` is not an isometry on ``T_D``."""
    return isometry_report(psi, m, n, t).defect


# -- full report -------------------------------------------------------------------


@dataclass
class OperatorReport:
    m: int
    n: int
    tree: TreeTruncation
    profile: MuNuProfile
    lower: float
    upper: float
    tail: TailClassification
    isometry: IsometryReport | None = None
    exact: object | None = None  # exact.NormSolution
    oracle: float | None = None

    def as_dict(self) -> dict:
        out = {
            "m": self.m,
            "n": self.n,
            "depth": self.tree.depth,
            "branching": self.tree.shape.describe(),
            "bounds": "distinct" if self.m != self.n else "equal",
            "lower": self.lower,
            "upper": self.upper,
            "profile": self.profile.as_dict(),
            "tail": self.tail.as_dict(),
            "isometry_defect": None if self.isometry is None else self.isometry.defect,
            "exact": None,
        }
        if self.exact is not None:
            out["exact"] = self.exact.as_dict(include_witness=False)
        if self.oracle is not None:
            out["oracle_lower_bound"] = self.oracle
        return out


def analyze(
    psi,
    m: int,
    n: int,
    t: TreeTruncation,
    *,
    exact: bool = False,
    tail: TailConfig = TailConfig(),
) -> OperatorReport:
    f = as_function(psi, t)
    prof = mu_nu_profile(f, m, n, t)
    if m != n:
        lower, upper = bounds_distinct(f, m, n, t, prof)
    else:
        lower, upper = bounds_equal(f, m, t)
    iso = isometry_report(f, m, n, t) if m != n and t.depth >= 3 else None
    report = OperatorReport(m, n, t, prof, lower, upper, classify_tail(prof, tail), iso)
    if exact:
        from .exact import exact_operator_norm

        report.exact = exact_operator_norm(f, m, n, t)
    return report
