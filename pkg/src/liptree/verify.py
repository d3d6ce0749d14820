"""Randomized verification suites for the inequalities of the theory.

Every suite is a pure function of ``(trials, seed, tree)`` and returns a
JSON-ready dict::

    {"suite": ..., "seed": ..., "trials": ..., "passed": bool,
     "checks": [{"name", "passed", "count", "worst_slack"}, ...],
     "failures": [first violating instances with context]}

A check passes when every recorded slack is non-negative; each check folds
its tolerance into the slack it records.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import testfns
from .exact import exact_operator_norm
from .operators import TailConfig, bounds_distinct, bounds_equal, classify_tail, isometry_report, mu_nu_profile
from .oracle import random_search
from .spaces import TreeFunction, check_embedding_chain, check_point_bound, derivative, integrate, norm, norm_k
from .symbols import ExplicitSymbol, RadialSymbol, TabulatedSymbol, as_function
from .tree import TreeShape, TreeTruncation, build_truncation
from .weights import Lambda, ell, weight_table

MAX_FAILURES = 20
DISTINCT_PAIRS = ((0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0))


class _Collector:
    def __init__(self):
        self.checks: dict[str, dict] = {}
        self.failures: list[dict] = []

    def record(self, name: str, slack: float, **context):
        slack = float(slack)
        c = self.checks.setdefault(name, {"name": name, "passed": True, "count": 0, "worst_slack": math.inf})
        c["count"] += 1
        c["worst_slack"] = min(c["worst_slack"], slack)
        if not slack >= 0:
            c["passed"] = False
            if len(self.failures) < MAX_FAILURES:
                self.failures.append({"check": name, "slack": slack, **context})

    def report(self, suite: str, trials: int, seed: int, tree: TreeTruncation | None) -> dict:
        checks = list(self.checks.values())
        out = {
            "suite": suite,
            "seed": seed,
            "trials": trials,
            "passed": all(c["passed"] for c in checks),
            "checks": checks,
            "failures": self.failures,
        }
        if tree is not None:
            out["branching"] = tree.shape.describe()
            out["depth"] = tree.depth
        return out


def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *key])))


# -- random inputs ---------------------------------------------------------------

_TEMPLATES = (
    "{a}",
    "{a}*ell({j},x)",
    "{a}/ell({j},x)",
    "{a}*Lambda({k},x)/Lambda({k2},x)",
    "{a}*exp(-{b}*x)",
    "{a}+{b}/Lambda({k},x)",
    "{a}*sqrt(x)",
    "{a}*min(x,{c})",
    "{a}*log(1+x)",
    "{a}*pow(x,{p})",
    "{a}*max(1/x,{b})",
)


def random_radial_symbol(rng: np.random.Generator) -> RadialSymbol:
    """A sum of one to three random terms from a family of radial shapes."""
    terms = []
    for _ in range(int(rng.integers(1, 4))):
        tpl = _TEMPLATES[int(rng.integers(len(_TEMPLATES)))]
        a = round(float(rng.uniform(-2.0, 2.0)), 4)
        text = tpl.format(
            a=f"({a})",
            b=round(float(rng.uniform(0.05, 1.5)), 4),
            c=round(float(rng.uniform(1.0, 6.0)), 4),
            p=round(float(rng.uniform(-1.0, 0.5)), 4),
            j=int(rng.integers(0, 4)),
            k=int(rng.integers(0, 4)),
            k2=int(rng.integers(0, 4)),
        )
        terms.append(text)
    root = None
    if rng.random() < 0.3:
        root = complex(rng.normal(), rng.normal())
    return RadialSymbol(" + ".join(terms), root)


def random_explicit_symbol(rng: np.random.Generator, tree: TreeTruncation) -> ExplicitSymbol:
    N = tree.n_vertices
    scale = float(np.exp(rng.uniform(-1.0, 1.0)))
    if rng.random() < 0.5:
        vals = scale * (rng.normal(size=N) + 1j * rng.normal(size=N))
    else:
        # slowly varying: small random steps from a random root value
        steps = 0.3 * scale * (rng.normal(size=N) + 1j * rng.normal(size=N))
        vals = integrate(tree, steps, complex(rng.normal(), rng.normal()))
    return ExplicitSymbol(tuple(complex(z) for z in vals))


def random_function(rng: np.random.Generator, tree: TreeTruncation) -> TreeFunction:
    """Random complex functions from three families (noise, walks, radial)."""
    N = tree.n_vertices
    kind = int(rng.integers(3))
    if kind == 0:
        vals = rng.normal(size=N) + 1j * rng.normal(size=N)
        return TreeFunction(tree, vals * np.exp(rng.uniform(-2, 2)))
    if kind == 1:
        steps = rng.normal(size=N) + 1j * rng.normal(size=N)
        steps *= (rng.random(N) < rng.uniform(0.05, 1.0))
        return TreeFunction(tree, integrate(tree, steps, complex(rng.normal(), rng.normal())))
    prof = np.cumsum(rng.normal(size=tree.depth + 1) + 1j * rng.normal(size=tree.depth + 1))
    return TreeFunction.radial(tree, prof)


def _describe(psi) -> dict:
    if isinstance(psi, (RadialSymbol, TabulatedSymbol)):
        return psi.as_dict()
    return {"kind": "explicit", "values": f"<{len(psi.values)} values>"}


# -- suites ------------------------------------------------------------------------


def suite_weights(trials: int, seed: int, tree: TreeTruncation | None = None, kmax: int = 6) -> dict:
    col = _Collector()
    grid = np.logspace(0.0, 6.0, 10_000)
    extra = np.exp(_rng(seed, 1).uniform(0.0, math.log(1e6), size=trials))
    x = np.sort(np.concatenate([grid, extra]))
    prev_lam = None
    for k in range(kmax + 1):
        lam = Lambda(k, x)
        l_k = ell(k, x)
        if k >= 1:
            col.record("ell_ge_1", float(np.min(l_k - 1.0)), k=k)
        col.record("Lambda_at_1_is_1", 0.0 if Lambda(k, 1.0) == 1.0 else -abs(Lambda(k, 1.0) - 1.0), k=k)
        prod = np.prod([ell(j, x) for j in range(k)], axis=0) if k else np.ones_like(x)
        rel = np.max(np.abs(lam - prod) / prod)
        col.record("product_identity", 1e-12 - rel, k=k)
        col.record("Lambda_monotone_in_x", float(np.min(np.diff(lam))), k=k)
        col.record("ell_monotone_in_x", float(np.min(np.diff(l_k))), j=k)
        if prev_lam is not None:
            i = int(np.argmin(lam - prev_lam))
            col.record("Lambda_monotone_in_k", float(lam[i] - prev_lam[i]), k=k, x=float(x[i]))
        prev_lam = lam
    col.record("ell_0_identity", -float(np.max(np.abs(ell(0, x) - x))))
    return col.report("weights", trials, seed, tree)


def suite_embedding(trials: int, seed: int, tree: TreeTruncation, kmax: int = 4) -> dict:
    col = _Collector()
    rng = _rng(seed, 2)
    for i in range(trials):
        f = random_function(rng, tree)
        g = random_function(rng, tree)
        chain = check_embedding_chain(f, kmax)
        for k in range(kmax):
            col.record("chain_nondecreasing", chain[k + 1] - chain[k] + 1e-12, sample=i, k=k)
        c = complex(rng.normal(), rng.normal())
        for k in range(kmax + 1):
            nf, ng = norm(f, k), norm(g, k)
            scale = max(1.0, nf + ng)
            col.record("triangle", nf + ng - norm(f + g, k) + 1e-12 * scale, sample=i, k=k)
            col.record("homogeneity", 1e-12 * max(1.0, abs(c) * nf) - abs(norm(f * c, k) - abs(c) * nf), sample=i, k=k)
        rebuilt = integrate(tree, derivative(f).values, f.root_value)
        err = float(np.max(np.abs(rebuilt - f.values)))
        col.record("reconstruction", 1e-12 * max(1.0, float(np.max(np.abs(f.values)))) - err, sample=i)
    zero = TreeFunction.constant(tree, 0.0)
    col.record("norm_of_zero", -max(norm(zero, k) for k in range(kmax + 1)))
    return col.report("embedding", trials, seed, tree)


def suite_pointbound(trials: int, seed: int, tree: TreeTruncation, kmax: int = 3) -> dict:
    col = _Collector()
    rng = _rng(seed, 3)
    for i in range(trials):
        f = random_function(rng, tree)
        for k in range(kmax + 1):
            col.record("point_evaluation", check_point_bound(f, k) + 1e-9, sample=i, k=k)
    return col.report("pointbound", trials, seed, tree)


def suite_testfns(trials: int, seed: int, tree: TreeTruncation, mmax: int = 4) -> dict:
    col = _Collector()
    D = tree.depth
    for m in range(mmax + 1):
        # f_v seminorm == 1 for every admissible v
        for v in tree.vertices():
            if 1 <= len(v) <= D - 1:
                rep = norm_k(testfns.make_fv(v, m, tree), m)
                col.record("f_v_seminorm_is_1", 1e-12 - abs(rep.seminorm - 1.0), m=m, vertex=str(v))
        col.record("half_chi_o_norm_is_1", 1e-12 - abs(norm(testfns.half_chi_o(tree), m) - 1.0), m=m)
        g = testfns.make_g_radial(m, tree)
        if m == 0:
            col.record("g_norm_0_is_1", 0.0 if norm(g, 0) == 1.0 else -abs(norm(g, 0) - 1.0))
        else:
            bound = 2.0 * math.prod(ell(j, 2.0) for j in range(1, m + 1))
            col.record("g_norm_bound", bound + 1e-9 - norm(g, m), m=m)
        lam_m = weight_table("Lambda", m, D)
        for j in range(1, D + 1):
            vk = tree.first_vertex(j)
            gk = testfns.make_gk(vk, m, tree)
            terms = np.abs(derivative(gk).values) * np.nan_to_num(lam_m[tree.depth_of])
            col.record("g_k_child_term_is_1", 1e-12 - abs(terms[tree.index(vk)] - 1.0), m=m, depth=j)
            col.record("g_k_terms_le_1", 1.0 + 1e-12 - float(terms.max()), m=m, depth=j)
            col.record("g_k_norm_le_2", 2.0 + 1e-12 - norm(gk, m), m=m, depth=j)
        hk_norms = [norm(testfns.make_hk(tree.first_vertex(j), m, tree), m) for j in range(4, D + 1)]
        if hk_norms:
            col.record("h_k_norm_finite", 0.0 if all(math.isfinite(h) for h in hk_norms) else -1.0, m=m)
            at2 = [testfns.hk_profile(j, m, D)[2] for j in range(4, D + 1)]
            col.record("h_k_pointwise_nonincreasing", float(np.min(-np.diff(at2))) + 1e-15 if len(at2) > 1 else 0.0, m=m)
    return col.report("testfns", trials, seed, tree)


def _sandwich_case(col, psi, m, n, t, **ctx):
    sol = exact_operator_norm(psi, m, n, t)
    lower, upper = bounds_distinct(psi, m, n, t)
    col.record("lower_le_exact", sol.value - lower + 1e-9, m=m, n=n, depth=t.depth, **ctx)
    col.record("exact_le_upper", upper + 1e-9 - sol.value, m=m, n=n, depth=t.depth, **ctx)
    return sol


def suite_sandwich(trials: int, seed: int, tree: TreeTruncation) -> dict:
    col = _Collector()
    rng = _rng(seed, 4)
    depths = sorted({max(1, tree.depth - 2), tree.depth})
    trees = [TreeTruncation(tree.shape, d) for d in depths]
    for i in range(trials):
        psi = random_radial_symbol(rng)
        for t in trees:
            for m, n in DISTINCT_PAIRS:
                _sandwich_case(col, psi, m, n, t, symbol=_describe(psi))
    for i in range(max(1, trials // 5)):
        psi = random_explicit_symbol(rng, tree)
        for m, n in DISTINCT_PAIRS:
            _sandwich_case(col, psi, m, n, tree, symbol=_describe(psi))
        for k in range(3):
            lo, up = bounds_equal(psi, k, tree)
            ex = exact_operator_norm(psi, k, k, tree).value
            col.record("equal_index_sandwich", min(ex - lo, up - ex) + 1e-9, k=k)
    chi_o = TabulatedSymbol((1.0,) + (0.0,) * tree.depth)
    for m, n in DISTINCT_PAIRS:
        if m > n:
            val = exact_operator_norm(RadialSymbol("1"), m, n, tree).value
            col.record("constant_one_exact_is_1", 1e-12 - abs(val - 1.0), m=m, n=n)
        val = exact_operator_norm(chi_o, m, n, tree).value
        col.record("chi_o_exact_is_2", 1e-12 - abs(val - 2.0), m=m, n=n)
    return col.report("sandwich", trials, seed, tree)


def suite_isometry(trials: int, seed: int, tree: TreeTruncation) -> dict:
    col = _Collector()
    rng = _rng(seed, 5)
    for i in range(trials):
        psi = random_radial_symbol(rng) if i % 2 == 0 else random_explicit_symbol(rng, tree)
        for m, n in DISTINCT_PAIRS:
            d = isometry_report(psi, m, n, tree).defect
            col.record("defect_positive", d - 1e-6, m=m, n=n, symbol=_describe(psi))
    for i in range(max(1, trials // 10)):
        c = complex(np.exp(2j * np.pi * rng.random()))
        psi = TabulatedSymbol((c,) * (tree.depth + 1))
        for m, n in DISTINCT_PAIRS:
            rep = isometry_report(psi, m, n, tree)
            expected = abs(Lambda(m, 3) - Lambda(n, 3))
            col.record("unimodular_defect_at_depth_2", 1e-9 - abs(rep.chi_defect_at(2) - expected), m=m, n=n)
    return col.report("isometry", trials, seed, tree)


def tail_cases(depth: int = 14) -> list[tuple[str, int, int, str, str]]:
    """``(symbol, m, n, tail, expected class)`` for the constant symbols."""
    cases = []
    for m in range(3):
        for n in range(3):
            if m > n:
                cases += [("1", m, n, "mu", "vanishing"), ("1", m, n, "nu", "vanishing")]
            elif m < n:
                cases.append(("1", m, n, "nu", "growing"))
        cases += [("0", m, (m + 1) % 3, "mu", "vanishing"), ("0", m, (m + 1) % 3, "nu", "vanishing")]
    return cases


def suite_tails(trials: int, seed: int, tree: TreeTruncation, cfg: TailConfig = TailConfig()) -> dict:
    col = _Collector()
    t = TreeTruncation(tree.shape, max(14, tree.depth))
    rng = _rng(seed, 6)
    scales = [1.0] + [float(np.exp(rng.uniform(-2, 2))) for _ in range(max(0, trials - 1))]
    for text, m, n, which, expected in tail_cases(t.depth):
        for c in scales:
            psi = RadialSymbol(f"{c!r}*{text}")
            cls = classify_tail(mu_nu_profile(psi, m, n, t), cfg)
            got = getattr(cls, which)
            col.record(f"{which}_{expected}", 0.0 if got == expected else -1.0,
                       symbol=psi.text, m=m, n=n, got=got, depth=t.depth)
    return col.report("tails", trials, seed, t)


def suite_oracle(trials: int, seed: int, tree: TreeTruncation, n_symbols: int = 2, n_seeds: int = 5) -> dict:
    col = _Collector()
    rng = _rng(seed, 7)
    symbols = [random_radial_symbol(rng) for _ in range(n_symbols // 2)]
    symbols += [random_explicit_symbol(rng, tree) for _ in range(n_symbols - n_symbols // 2)]
    for psi in symbols:
        for m, n in DISTINCT_PAIRS[:4]:
            sol = exact_operator_norm(psi, m, n, tree)
            ctx = {"m": m, "n": n, "symbol": _describe(psi)}
            col.record("witness_unit_norm", 1e-12 - abs(norm(sol.witness, m) - 1.0), **ctx)
            image = norm(as_function(psi, tree) * sol.witness, n)
            col.record("witness_attains", image - sol.value + 1e-9, **ctx)
            for s in range(n_seeds):
                res = random_search(psi, m, n, tree, trials, seed * 1000 + s, extra=[sol.witness])
                col.record("exact_ge_oracle", sol.value + 1e-9 - res.best, seed=seed * 1000 + s, **ctx)
                col.record("interior_t_le_endpoint", sol.value + 1e-9 - res.by_strategy["interior_t"], **ctx)
                col.record("oracle_reaches_witness", res.best - sol.value + 1e-9, **ctx)
    return col.report("oracle", trials, seed, tree)


SUITES: dict[str, Callable[..., dict]] = {
    "weights": suite_weights,
    "embedding": suite_embedding,
    "pointbound": suite_pointbound,
    "testfns": suite_testfns,
    "sandwich": suite_sandwich,
    "isometry": suite_isometry,
    "tails": suite_tails,
    "oracle": suite_oracle,
}

DEFAULT_TRIALS = {
    "weights": 1000,
    "embedding": 200,
    "pointbound": 100,
    "testfns": 1,
    "sandwich": 50,
    "isometry": 100,
    "tails": 5,
    "oracle": 10_000,
}


def run_suite(name: str, trials: int | None = None, seed: int = 0, tree: TreeTruncation | None = None) -> dict:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if tree is None:
        tree = build_truncation(TreeShape(2), 8)
    trials = DEFAULT_TRIALS[name] if trials is None else int(trials)
    return SUITES[name](trials, seed, tree)
