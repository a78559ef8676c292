import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cheapquad.cheb import BoxDomain, ChebBasis
from cheapquad.rules import QuadRule, gauss_chebyshev_box, gauss_legendre, gram_residual, verify_rule_exactness


def test_gauss_legendre_two_and_three_points():
    r2 = gauss_legendre(2)
    np.testing.assert_allclose(r2.nodes[:, 0], [-1 / math.sqrt(3), 1 / math.sqrt(3)], rtol=0, atol=1e-15)
    np.testing.assert_allclose(r2.weights, [1.0, 1.0], rtol=0, atol=1e-15)
    r3 = gauss_legendre(3)
    np.testing.assert_allclose(r3.nodes[:, 0], [-math.sqrt(0.6), 0.0, math.sqrt(0.6)], rtol=0, atol=1e-15)
    np.testing.assert_allclose(r3.weights, [5 / 9, 8 / 9, 5 / 9], rtol=0, atol=1e-15)
    assert r3.ade == 5 and r2.ade == 3


@pytest.mark.parametrize("q", [1, 2, 5, 8, 17, 40])
def test_gauss_legendre_matches_numpy(q):
    x, w = np.polynomial.legendre.leggauss(q)
    r = gauss_legendre(q)
    np.testing.assert_allclose(r.nodes[:, 0], x, atol=2e-15)
    np.testing.assert_allclose(r.weights, w, atol=2e-15)
    # symmetric by construction
    np.testing.assert_array_equal(r.nodes[:, 0], -r.nodes[::-1, 0])


@pytest.mark.parametrize("q", [3, 6, 11])
def test_gauss_legendre_exactness(q):
    r = gauss_legendre(q)
    for k in range(2 * q):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        assert r.integrate(lambda p: p[:, 0] ** k) == pytest.approx(exact, abs=1e-14)


def test_gauss_legendre_rejects_zero():
    with pytest.raises(ValueError):
        gauss_legendre(0)


@pytest.mark.parametrize("dim,n", [(1, 0), (2, 3), (3, 4)])
def test_gauss_chebyshev_structure(dim, n):
    box = BoxDomain.unit(dim)
    rule = gauss_chebyshev_box(box, n)
    assert len(rule) == (n + 1) ** dim
    assert rule.ade == 2 * n
    assert rule.weights.sum() == pytest.approx(math.pi**dim, rel=1e-14)
    assert len(np.unique(rule.weights)) == 1


def test_gauss_chebyshev_one_dimensional_nodes():
    rule = gauss_chebyshev_box(BoxDomain.unit(1), 2)
    np.testing.assert_allclose(np.sort(rule.nodes[:, 0]), [-math.sqrt(3) / 2, 0.0, math.sqrt(3) / 2], atol=1e-15)


def test_gauss_chebyshev_box_mapping():
    box = BoxDomain((1.0, -2.0), (3.0, 0.0))
    rule = gauss_chebyshev_box(box, 5)
    ref = gauss_chebyshev_box(BoxDomain.unit(2), 5)
    np.testing.assert_allclose(rule.nodes, box.from_reference(ref.nodes), rtol=0, atol=1e-15)
    np.testing.assert_array_equal(rule.weights, ref.weights)


def test_rule_arrays_read_only():
    rule = gauss_chebyshev_box(BoxDomain.unit(2), 3)
    with pytest.raises(ValueError):
        rule.weights[0] = 1.0


def test_rule_validation():
    box = BoxDomain.unit(2)
    with pytest.raises(ValueError):
        QuadRule(np.zeros((3, 2)), np.array([1.0, -1.0, 1.0]), 1, box)
    with pytest.raises(ValueError):
        QuadRule(np.zeros((3, 2)), np.ones(2), 1, box)
    with pytest.raises(ValueError):
        QuadRule(np.zeros((3, 3)), np.ones(3), 1, box)
    with pytest.raises(ValueError):
        gauss_chebyshev_box(box, -1)


def test_under_resolved_rule():
    basis = ChebBasis(BoxDomain.unit(2), 4)
    rule = gauss_chebyshev_box(basis.box, 3)
    with pytest.raises(ValueError):
        verify_rule_exactness(rule, basis)
    # the degree-8 product tau_4^2 is integrated wrongly by a degree-6 rule
    assert gram_residual(rule, basis) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 3), st.integers(0, 10), st.integers(0, 2**31 - 1))
def test_gram_identity_random_boxes(dim, n, seed):
    rng = np.random.default_rng(seed)
    lo = rng.uniform(-5, 5, dim)
    box = BoxDomain(tuple(lo), tuple(lo + rng.uniform(0.1, 4, dim)))
    assert verify_rule_exactness(gauss_chebyshev_box(box, n), ChebBasis(box, n)) <= 1e-12
