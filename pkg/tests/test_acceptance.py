"""Acceptance gate: one test per primary criterion.

Each test prints a single ``ACCEPTANCE PASS|FAIL <criterion>`` line (shown
even when pytest captures output) and then asserts.  Run on its own with

    pytest tests/test_acceptance.py -v
"""

import math

import numpy as np
import pytest

from liptree import cli, testfns
from liptree.exact import exact_operator_norm
from liptree.operators import bounds_distinct, classify_tail, isometry_report, mu_nu_profile
from liptree.oracle import random_search
from liptree.spaces import TreeFunction, norm, norm_k
from liptree.symbols import RadialSymbol, TabulatedSymbol, as_function
from liptree.tree import build_truncation
from liptree.verify import DISTINCT_PAIRS, SUITES, random_explicit_symbol, random_radial_symbol
from liptree.weights import Lambda, ell

from _reference import ref_Lambda, ref_ell, ref_norm

SEED = 20261019


@pytest.fixture
def gate(capsys):
    """Print one PASS/FAIL line per criterion, then assert."""

    def check(name, ok, detail=""):
        with capsys.disabled():
            print(f"\nACCEPTANCE {'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else ""))
        assert ok, f"{name}: {detail}"

    return check


@pytest.fixture(scope="module")
def tree():
    return build_truncation(2, 8)


def _rng(*key):
    return np.random.default_rng([SEED, *key])


def _random_f(rng, t):
    """Random complex function with mixed scales, including some constant runs."""
    vals = rng.normal(size=t.n_vertices) + 1j * rng.normal(size=t.n_vertices)
    vals *= np.exp(rng.uniform(-3, 3))
    if rng.random() < 0.3:
        vals[t.depth_of > rng.integers(1, t.depth + 1)] = vals[0]
    return TreeFunction(t, vals)


def test_weight_laws(gate):
    x = np.logspace(0, 6, 10_000)
    worst = {"mono_k": math.inf, "ell_ge_1": math.inf, "prod": 0.0, "at1": 0.0, "ref": 0.0}
    for k in range(7):
        lam, lam_next = Lambda(k, x), Lambda(k + 1, x)
        worst["mono_k"] = min(worst["mono_k"], float(np.min(lam_next - lam)))
        if k >= 1:
            worst["ell_ge_1"] = min(worst["ell_ge_1"], float(np.min(ell(k, x) - 1)))
        prod = np.prod([ell(j, x) for j in range(k)], axis=0) if k else np.ones_like(x)
        worst["prod"] = max(worst["prod"], float(np.max(np.abs(lam - prod) / prod)))
        worst["at1"] = max(worst["at1"], abs(Lambda(k, 1.0) - 1.0))
        for xi in x[::97]:
            worst["ref"] = max(worst["ref"], abs(Lambda(k, xi) - ref_Lambda(k, xi)) / ref_Lambda(k, xi))
    ok = (worst["mono_k"] >= 0 and worst["ell_ge_1"] >= 0 and worst["prod"] <= 1e-12
          and worst["at1"] == 0 and worst["ref"] <= 1e-12)
    gate("weight laws", ok, ", ".join(f"{k}={v:.3g}" for k, v in worst.items()))


def test_embedding_chain(gate, tree):
    rng = _rng(1)
    worst = math.inf
    for _ in range(200):
        f = _random_f(rng, tree)
        chain = [norm(f, k) for k in range(5)]
        worst = min(worst, min(b - a for a, b in zip(chain, chain[1:])) + 1e-12)
    gate("embedding chain ||f||_0 <= ... <= ||f||_4", worst >= 0, f"worst slack {worst:.3g}")


def test_point_evaluation(gate, tree):
    rng = _rng(2)
    paths = [tuple(v) for v in tree.vertices()]
    worst = math.inf
    for _ in range(100):
        f = _random_f(rng, tree)
        fd = dict(zip(paths, f.values.tolist()))
        for k in range(4):
            fk = ref_norm(fd, k)
            for p in paths[1:]:
                factor = 1 + len(p) if k == 0 else ref_ell(k, len(p))
                worst = min(worst, factor * fk - abs(fd[p]))
    gate("point-evaluation bound", worst >= -1e-9, f"worst slack {worst:.3g}")


def test_test_function_normalizations(gate, tree):
    D = tree.depth
    errs = {"f_v": 0.0, "g_0": 0.0, "half_chi_o": 0.0}
    g_slack = math.inf
    for m in range(5):
        for v in tree.vertices():
            if 1 <= len(v) <= D - 1:
                errs["f_v"] = max(errs["f_v"], abs(norm_k(testfns.make_fv(v, m, tree), m).seminorm - 1))
        errs["half_chi_o"] = max(errs["half_chi_o"], abs(norm(testfns.half_chi_o(tree), m) - 1))
        g = testfns.make_g_radial(m, tree)
        if m == 0:
            errs["g_0"] = abs(norm(g, 0) - 1)
        else:
            bound = 2 * math.prod(ref_ell(j, 2.0) for j in range(1, m + 1))
            g_slack = min(g_slack, bound + 1e-9 - norm(g, m))
    ok = errs["f_v"] <= 1e-12 and errs["g_0"] == 0 and errs["half_chi_o"] == 0 and g_slack >= 0
    gate("test-function normalizations", ok,
         ", ".join(f"{k} err={v:.3g}" for k, v in errs.items()) + f", g bound slack={g_slack:.3g}")


def test_sandwich(gate):
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([SEED, 4])))
    symbols = [random_radial_symbol(rng) for _ in range(50)]
    worst, count = math.inf, 0
    for D in (6, 8):
        t = build_truncation(2, D)
        for psi in symbols:
            for m, n in DISTINCT_PAIRS:
                lo, up = bounds_distinct(psi, m, n, t)
                val = exact_operator_norm(psi, m, n, t).value
                worst = min(worst, val - (lo - 1e-9), up + 1e-9 - val)
                count += 1
        known = []
        for m, n in DISTINCT_PAIRS:
            if m > n:
                known.append(exact_operator_norm(RadialSymbol("1"), m, n, t).value == 1)
            known.append(exact_operator_norm(TabulatedSymbol((1.0,) + (0.0,) * D), m, n, t).value == 2)
    ok = worst >= 0 and all(known)
    gate("sandwich lower <= exact <= upper", ok,
         f"{count} cases, worst slack {worst:.3g}, known values {sum(known)}/{len(known)}")


def test_solver_vs_oracle(gate, tree):
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([SEED, 7])))
    symbols = [random_radial_symbol(rng), random_explicit_symbol(rng, tree)]
    dominance = witness = interior = math.inf
    for psi in symbols:
        f = as_function(psi, tree)
        for m, n in DISTINCT_PAIRS[:4]:
            sol = exact_operator_norm(psi, m, n, tree)
            witness = min(witness, norm(f * sol.witness, n) - sol.value + 1e-9,
                          1e-12 - abs(norm(sol.witness, m) - 1))
            for seed in range(5):
                res = random_search(psi, m, n, tree, 10_000, seed)
                dominance = min(dominance, sol.value + 1e-9 - res.best)
                interior = min(interior, sol.value + 1e-9 - res.by_strategy["interior_t"])
    ok = dominance >= 0 and witness >= 0 and interior >= 0
    gate("exact solver vs random search", ok,
         f"dominance slack {dominance:.3g}, witness slack {witness:.3g}, interior-t slack {interior:.3g}")


def test_isometry_non_existence(gate, tree):
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([SEED, 5])))
    smallest = math.inf
    for i in range(100):
        psi = random_radial_symbol(rng) if i % 2 == 0 else random_explicit_symbol(rng, tree)
        for m, n in DISTINCT_PAIRS:
            smallest = min(smallest, isometry_report(psi, m, n, tree).defect)
    # unimodular constants: compare with a direct norm computation of chi_w at |w| = 2
    w = tree.first_vertex(2)
    chi = testfns.make_chi(w, tree)
    err = 0.0
    for theta in np.linspace(0, 2 * np.pi, 7):
        c = complex(np.exp(1j * theta))
        psi = TabulatedSymbol((c,) * (tree.depth + 1))
        for m, n in DISTINCT_PAIRS + ((0, 3), (4, 1)):
            got = isometry_report(psi, m, n, tree).chi_defect_at(2)
            expected = abs(ref_Lambda(m, 3) - ref_Lambda(n, 3))
            direct = abs(norm(chi * c, n) - norm(chi, m))
            err = max(err, abs(got - expected), abs(direct - expected))
    ok = smallest > 1e-6 and err <= 1e-9
    gate("isometry defect", ok, f"smallest defect {smallest:.3g}, unimodular |w|=2 error {err:.3g}")


def test_compactness_diagnostics(gate):
    t = build_truncation(2, 14)
    results = []
    for m in range(3):
        for n in range(3):
            cls = classify_tail(mu_nu_profile(RadialSymbol("1"), m, n, t))
            if m > n:
                results.append(((m, n), "both vanishing", cls.mu == cls.nu == "vanishing"))
            elif m < n:
                results.append(((m, n), "nu growing", cls.nu == "growing"))
    report = SUITES["tails"]
    seeds = [report(3, s, t)["checks"] for s in (0, 1, 2)]
    stable = all([c["passed"] for c in s] == [c["passed"] for c in seeds[0]] for s in seeds)
    bad = [r for r in results if not r[2]]
    gate("compactness tail diagnostics at D=14", not bad and stable,
         f"{len(results) - len(bad)}/{len(results)} constant-symbol labels correct, stable across seeds={stable}")


def test_determinism(gate, capsys):
    trials = {"oracle": 200, "sandwich": 5, "isometry": 10, "embedding": 20, "pointbound": 10}
    mismatched = []
    for suite in SUITES:
        argv = ["verify", "--suite", suite, "--seed", "3"]
        if suite in trials:
            argv += ["--trials", str(trials[suite])]
        outputs = []
        for _ in range(2):
            code = cli.main(argv)
            outputs.append((code, capsys.readouterr().out))
        if outputs[0] != outputs[1]:
            mismatched.append(suite)
    gate("determinism of verify reports", not mismatched,
         f"{len(SUITES) - len(mismatched)}/{len(SUITES)} suites byte-identical"
         + (f", mismatched: {mismatched}" if mismatched else ""))
