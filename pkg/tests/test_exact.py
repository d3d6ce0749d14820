import numpy as np
import pytest

from liptree.exact import endpoint_values, exact_operator_norm, operator_image_norm, path_prefix
from liptree.operators import bounds_distinct
from liptree.spaces import derivative, norm
from liptree.symbols import ExplicitSymbol, RadialSymbol, TabulatedSymbol, as_function
from liptree.tree import VertexId, build_truncation
from liptree.weights import Lambda

from _reference import brute_force_operator_norm, ref_Lambda

PAIRS = [(0, 1), (1, 0), (1, 2), (2, 1), (0, 0), (2, 2)]


def _psi_dict(psi, t):
    f = as_function(psi, t)
    return {tuple(v): float(f(v).real) for v in t.vertices()}


@pytest.mark.parametrize("shape, depth", [(2, 2), (1, 5), ((3, 1), 2)])
def test_matches_brute_force_on_tiny_trees(shape, depth, rng):
    t = build_truncation(shape, depth)
    for _ in range(6):
        psi = ExplicitSymbol(tuple(rng.normal(size=t.n_vertices)))
        for m, n in PAIRS:
            sol = exact_operator_norm(psi, m, n, t)
            ref = brute_force_operator_norm(_psi_dict(psi, t), m, n)
            assert sol.value == pytest.approx(ref, rel=1e-12)


def test_matches_brute_force_depth_3():
    t = build_truncation(2, 3)
    rng = np.random.default_rng(5)
    psi = ExplicitSymbol(tuple(rng.normal(size=t.n_vertices)))
    for m, n in [(0, 1), (2, 1)]:
        ref = brute_force_operator_norm(_psi_dict(psi, t), m, n)
        assert exact_operator_norm(psi, m, n, t).value == pytest.approx(ref, rel=1e-12)


def test_radial_symbol_matches_explicit_copy(t28):
    psi = RadialSymbol("1/ell(1,x) - 0.3*ell(2,x)")
    f = as_function(psi, t28)
    explicit = ExplicitSymbol(tuple(f.values))
    for m, n in PAIRS:
        a, b = exact_operator_norm(psi, m, n, t28), exact_operator_norm(explicit, m, n, t28)
        assert a.value == pytest.approx(b.value, rel=1e-14)
        assert len(a.vertex) == len(b.vertex)


@pytest.mark.parametrize("m, n", [(1, 0), (2, 0), (2, 1), (5, 3)])
def test_constant_one(t28, m, n):
    sol = exact_operator_norm(RadialSymbol("1"), m, n, t28)
    assert sol.value == 1
    assert sol.t_star == 1
    assert np.all(sol.witness.values == 1)


@pytest.mark.parametrize("m, n", [(0, 1), (1, 0), (1, 2), (3, 1)])
def test_chi_o(t28, m, n):
    sol = exact_operator_norm(TabulatedSymbol((1.0,) + (0.0,) * 8), m, n, t28)
    assert sol.value == 2
    assert np.all(sol.witness.values == 1)


def test_zero_symbol(t28):
    sol = exact_operator_norm(RadialSymbol("0"), 1, 0, t28)
    assert sol.value == 0
    assert norm(sol.witness, 1) == 1


def test_witness_feasible_and_attaining(t28, rng):
    for i in range(10):
        vals = rng.normal(size=t28.n_vertices) + 1j * rng.normal(size=t28.n_vertices)
        psi = ExplicitSymbol(tuple(vals * np.exp(-0.3 * t28.depth_of)))
        for m, n in PAIRS:
            sol = exact_operator_norm(psi, m, n, t28)
            assert norm(sol.witness, m) == pytest.approx(1.0, abs=1e-12)
            assert operator_image_norm(psi, sol.witness, n) >= sol.value - 1e-9


def test_interior_witness_is_path_supported(t28):
    # growing symbol with m < n makes the t = 0 endpoint win
    sol = exact_operator_norm(RadialSymbol("x"), 0, 2, t28)
    assert sol.t_star == 0
    assert sol.witness.root_value == 0
    d = derivative(sol.witness)
    path = {sol.vertex[:j] for j in range(1, len(sol.vertex) + 1)}
    support = {tuple(v) for v in t28.vertices() if d(v) != 0}
    assert support == path


def test_monotone_in_depth(rng):
    vals = rng.normal(size=build_truncation(2, 8).n_vertices)
    psi = ExplicitSymbol(tuple(vals))
    for m, n in PAIRS:
        seq = [exact_operator_norm(psi, m, n, build_truncation(2, D)).value for D in (4, 6, 8)]
        assert seq[0] <= seq[1] <= seq[2]


def test_homogeneity(t28):
    psi = as_function(RadialSymbol("0.5 + 1/Lambda(2,x)"), t28)
    base = exact_operator_norm(psi, 1, 2, t28).value
    for c in (3.0, -0.25, 2j - 1):
        assert exact_operator_norm(psi * c, 1, 2, t28).value == pytest.approx(abs(c) * base, rel=1e-13)


def test_sandwich_and_constant_bound(t28, rng):
    for _ in range(10):
        psi = ExplicitSymbol(tuple(rng.normal(size=t28.n_vertices)))
        for m, n in [(0, 1), (1, 0), (1, 2), (2, 1)]:
            lo, up = bounds_distinct(psi, m, n, t28)
            val = exact_operator_norm(psi, m, n, t28).value
            assert lo - 1e-9 <= val <= up + 1e-9
            assert val >= norm(as_function(psi, t28), n) - 1e-12


def test_path_prefix():
    P = path_prefix(1, 5)
    assert P[0] == P[1] == 0
    assert P[2] == 1
    assert P[5] == pytest.approx(1 + 1 / 2 + 1 / 3 + 1 / 4)


def test_endpoint_values_hand_computed():
    # path tree o - a - b with psi = (1, 2, 2), m = 1, n = 0
    t = build_truncation(1, 2)
    psi = ExplicitSymbol((1.0, 2.0, 2.0))
    g0, g1 = endpoint_values(psi, 1, 0, t)
    # g(1) = |psi(o)| + |psi'(v)|; g(0) = |psi'(v)| P(|v|) + |psi(v)| / Lambda_1(|v|)
    assert g1.tolist() == [0.0, 2.0, 1.0]
    assert g0.tolist() == [0.0, 2.0, 1.0]
    sol = exact_operator_norm(psi, 1, 0, t)
    assert sol.value == 2.0
    assert sol.t_star == 1


def test_as_dict_shape(t28):
    sol = exact_operator_norm(RadialSymbol("x"), 0, 1, t28)
    d = sol.as_dict()
    assert set(d) >= {"value", "vertex", "t_star", "witness", "m", "n", "depth"}
    assert "witness" not in sol.as_dict(include_witness=False)
    assert d["value"] == sol.value
    # t = 0 at depth 8: Lambda_1(8) (P(8) + 8) = 8 * (7 + 8)
    assert sol.value == pytest.approx(120.0)
    assert sol.value_t1 == pytest.approx(1 + ref_Lambda(1, 8))
