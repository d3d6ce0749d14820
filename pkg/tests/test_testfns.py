import math

import numpy as np
import pytest

from liptree import testfns
from liptree.spaces import derivative, norm, norm_k
from liptree.tree import VertexId, VertexOutOfRangeError, build_truncation, children
from liptree.weights import Lambda, ell

from _reference import as_dict, ref_Lambda, ref_ell, ref_norm


def test_chi_at_root(t23):
    f = testfns.make_chi(VertexId(), t23)
    assert f(VertexId()) == 1
    assert np.count_nonzero(f.values) == 1


def test_chi_outside_truncation(t23):
    with pytest.raises(VertexOutOfRangeError):
        testfns.make_chi(VertexId([0, 0, 0, 0]), t23)


@pytest.mark.parametrize("path", [[1], [0, 1], [1, 1, 0, 1]])
def test_chi_norm_zero_is_one(t28, path):
    assert norm(testfns.make_chi(VertexId(path), t28), 0) == 1


@pytest.mark.parametrize("m", range(5))
def test_fv_seminorm_is_one_everywhere(t28, m):
    for v in t28.vertices():
        if 1 <= len(v) <= t28.depth - 1:
            f = testfns.make_fv(v, m, t28)
            rep = norm_k(f, m)
            assert rep.root_abs == 0
            assert rep.seminorm == pytest.approx(1.0, abs=1e-12)


def test_fv_derivative_support(t28):
    v = VertexId([1, 0, 1])
    d = derivative(testfns.make_fv(v, 2, t28))
    support = {w for w in t28.vertices() if d(w) != 0}
    assert support == {v, *children(v, t28)}


def test_fv_is_chi_for_m0(t28):
    v = VertexId([0, 1])
    assert np.array_equal(testfns.make_fv(v, 0, t28).values, testfns.make_chi(v, t28).values)


def test_fv_preconditions(t28):
    with pytest.raises(testfns.TestFunctionError):
        testfns.make_fv(VertexId(), 1, t28)
    with pytest.raises(testfns.TestFunctionError):
        testfns.make_fv(t28.first_vertex(8), 1, t28)


def test_g_radial_values(t28):
    g = testfns.make_g_radial(1, t28)
    assert g(VertexId()) == 0
    assert g(VertexId([1])) == 1
    assert g(VertexId([1, 0, 1])) == pytest.approx(ref_ell(1, 3))


def test_g_norms(t28):
    assert norm(testfns.make_g_radial(0, t28), 0) == 1
    assert 2 * ell(1, 2.0) == pytest.approx(3.3863, abs=1e-4)
    for m in range(1, 5):
        g = testfns.make_g_radial(m, t28)
        bound = 2 * math.prod(ref_ell(j, 2.0) for j in range(1, m + 1))
        assert norm(g, m) <= bound + 1e-9
        assert norm(g, m) == pytest.approx(ref_norm(as_dict(g), m), rel=1e-13)


@pytest.mark.parametrize("m", range(4))
def test_gk_terms(t28, m):
    for j in range(1, t28.depth + 1):
        vk = t28.first_vertex(j)
        gk = testfns.make_gk(vk, m, t28)
        d = derivative(gk)
        # the term at v_k is Lambda_m(|v_k|)/Lambda_m(|v_k|) = 1, all others are <= 1
        assert abs(d(vk)) * Lambda(m, j) == pytest.approx(1.0, abs=1e-12)
        assert norm_k(gk, m).seminorm <= 1 + 1e-12
        assert norm(gk, m) <= 2 + 1e-12


def test_gk_pointwise_vanishing(t28):
    w = VertexId([0])
    vals = [abs(testfns.make_gk(t28.first_vertex(j), 1, t28)(w)) for j in range(3, 9)]
    assert all(v == 0 for v in vals)
    root_vals = [abs(testfns.make_gk(t28.first_vertex(j), 1, t28)(VertexId())) for j in range(1, 9)]
    assert root_vals[0] == 1 and all(v == 0 for v in root_vals[1:])


def test_hk_branches():
    t = build_truncation(2, 10)
    m, K = 1, 7
    h = testfns.make_hk(t.first_vertex(K), m, t)
    top = ref_ell(m, K)
    for j in range(t.depth + 1):
        v = t.first_vertex(j)
        if j <= 1:
            assert h(v) == 0
        elif j < K - 1:
            assert h(v) == pytest.approx(ref_ell(m, j) ** 2 / top)
        else:
            assert h(v) == pytest.approx(top)


def test_hk_precondition(t28):
    with pytest.raises(testfns.TestFunctionError):
        testfns.make_hk(t28.first_vertex(3), 1, t28)


def test_hk_norms_bounded_over_k():
    t = build_truncation(2, 12)
    for m in range(4):
        norms = [norm(testfns.make_hk(t.first_vertex(j), m, t), m) for j in range(4, 12)]
        assert all(math.isfinite(x) for x in norms)
        assert max(norms) <= 2 * min(norms)
    # for m = 0 the increments are (2j-1)/K below the jump and the jump is < 4
    norms0 = [norm(testfns.make_hk(t.first_vertex(j), 0, t), 0) for j in range(4, 12)]
    assert max(norms0) <= 4


def test_hk_pointwise_vanishing():
    at2 = [testfns.hk_profile(j, 2, 14)[2] for j in range(4, 15)]
    assert all(b < a for a, b in zip(at2, at2[1:]))


def test_half_chi_o_and_one(t28):
    for m in range(5):
        assert norm(testfns.half_chi_o(t28), m) == 1
        assert norm(testfns.one(t28), m) == 1


def test_make_dispatch(t28):
    v = VertexId([0, 1])
    assert np.array_equal(testfns.make("f_v", t28, v, 2).values, testfns.make_fv(v, 2, t28).values)
    assert np.array_equal(testfns.make("one", t28).values, np.ones(t28.n_vertices))
    for kind in testfns.KINDS:
        vertex = t28.first_vertex(5) if kind in ("chi", "f_v", "g_k", "h_k") else None
        f = testfns.make(kind, t28, vertex, 1)
        assert f.tree is t28
    with pytest.raises(testfns.TestFunctionError):
        testfns.make("chi", t28)
    with pytest.raises(testfns.TestFunctionError):
        testfns.make("nope", t28)


def test_reference_Lambda_sanity():
    assert ref_Lambda(2, 3.0) == pytest.approx(3 * (1 + math.log(3)))
