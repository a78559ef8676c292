import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cheapquad.cheb import (
    BoxDomain,
    ChebBasis,
    chebyshev_table,
    christoffel_square_bound,
    graded_lex_order,
    tau_antiderivative_table,
    tau_table,
)
from cheapquad.rules import gauss_chebyshev_box, gauss_legendre


def test_graded_lex_order():
    assert graded_lex_order(2, 2) == ((0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0))
    assert graded_lex_order(1, 3) == ((0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0))
    assert graded_lex_order(0, 2) == ((0, 0),)


@pytest.mark.parametrize("degree,dim", [(0, 2), (5, 2), (16, 2), (4, 3), (16, 3), (3, 1)])
def test_basis_size(degree, dim):
    basis = ChebBasis(BoxDomain.unit(dim), degree)
    assert basis.size == math.comb(degree + dim, dim) == len(basis.order)
    assert basis.mass == pytest.approx(math.pi**dim, rel=1e-15)


def test_chebyshev_recurrence_matches_cosine():
    theta = np.linspace(0.0, math.pi, 37)
    T = chebyshev_table(np.cos(theta), 12)
    for m in range(13):
        np.testing.assert_allclose(T[:, m], np.cos(m * theta), atol=1e-13)


def test_tau_normalization():
    # constant and mass-normalized cosines
    t = np.array([0.5])
    tau = tau_table(t, 2)[0]
    np.testing.assert_allclose(tau, [1 / math.sqrt(math.pi), math.sqrt(2 / math.pi) * 0.5, -math.sqrt(2 / math.pi) * 0.5],
                               rtol=1e-15)


def test_vandermonde_point_values():
    basis = ChebBasis(BoxDomain((0.0, 0.0), (2.0, 1.0)), 2)
    got = basis.eval([1.5, 0.25])  # reference point (0.5, -0.5)
    a = 1 / math.pi
    b = math.sqrt(2) / (2 * math.pi)
    np.testing.assert_allclose(got, [a, -b, b, -b, -a / 2, -b], rtol=1e-14)


def test_single_point_and_batch_agree(rng):
    basis = ChebBasis(BoxDomain((-1.0, 2.0, 0.0), (0.5, 3.0, 4.0)), 6)
    pts = basis.box.from_reference(rng.uniform(-1, 1, (5, 3)))
    V = basis.vandermonde(pts)
    for i, p in enumerate(pts):
        np.testing.assert_array_equal(basis.eval(p), V[i])
    np.testing.assert_allclose(basis.christoffel(pts), np.sum(V**2, axis=1), rtol=1e-14)


def test_dimension_mismatch_rejected():
    basis = ChebBasis(BoxDomain.unit(2), 3)
    with pytest.raises(ValueError):
        basis.vandermonde(np.zeros((4, 3)))
    with pytest.raises(ValueError):
        basis.eval([np.nan, 0.0])


def test_orthonormal_on_gauss_chebyshev():
    basis = ChebBasis(BoxDomain((0.0, -2.0), (3.0, 1.0)), 7)
    rule = gauss_chebyshev_box(basis.box, 7)
    V = basis.vandermonde(rule.nodes)
    G = V.T @ (rule.weights[:, None] * V)
    assert np.max(np.abs(G - np.eye(basis.size))) < 1e-13


@pytest.mark.parametrize("n", [0, 1, 2, 5, 10, 16])
def test_christoffel_corner_bound(n):
    basis = ChebBasis(BoxDomain.unit(2), n)
    corners = np.array([[1, 1], [-1, 1], [1, -1], [-1, -1]], dtype=float)
    np.testing.assert_allclose(np.sqrt(basis.christoffel(corners)), christoffel_square_bound(n), rtol=1e-13)
    assert christoffel_square_bound(n) == pytest.approx(math.sqrt(2 * n * n + 2 * n + 1) / math.pi)


def test_christoffel_bound_small_values():
    assert christoffel_square_bound(0) == pytest.approx(1 / math.pi, rel=1e-15)
    assert christoffel_square_bound(3) == pytest.approx(5 / math.pi, rel=1e-15)


def test_antiderivative_table_derivative():
    t = np.linspace(-0.9, 0.9, 11)
    h = 1e-6
    d = (tau_antiderivative_table(t + h, 9) - tau_antiderivative_table(t - h, 9)) / (2 * h)
    np.testing.assert_allclose(d, tau_table(t, 9), atol=1e-8)


def test_antiderivative_integrates_basis():
    box = BoxDomain((-0.3, 1.0), (1.7, 2.5))
    basis = ChebBasis(box, 8)
    gl = gauss_legendre(10)
    a, b, y = -0.1, 1.2, 1.8
    xs = a + (b - a) * 0.5 * (gl.nodes[:, 0] + 1)
    vals = basis.vandermonde(np.column_stack([xs, np.full_like(xs, y)]))
    exact = 0.5 * (b - a) * (gl.weights @ vals)
    W = basis.antiderivative_vandermonde([[b, y], [a, y]])
    np.testing.assert_allclose(W[0] - W[1], exact, atol=1e-14)
    for j in (0, 5, basis.size - 1):
        diff = basis.eval_antiderivative(j, [b, y]) - basis.eval_antiderivative(j, [a, y])
        assert diff == pytest.approx(exact[j], abs=1e-14)


def test_antiderivative_errors():
    basis = ChebBasis(BoxDomain.unit(2), 3)
    with pytest.raises(IndexError):
        basis.antiderivative_x(basis.size)
    with pytest.raises(ValueError):
        ChebBasis(BoxDomain.unit(3), 2).eval_antiderivative(0, [0, 0, 0])
    assert basis.antiderivative_x(0).scale == 1.0


@pytest.mark.parametrize(
    "lo,hi",
    [((0.0,), (0.0,)), ((1.0, 0.0), (0.0, 1.0)), ((0.0, 0.0), (1.0, np.inf)), ((0,) * 4, (1,) * 4), ((0.0, 0.0), (1.0,))],
)
def test_box_validation(lo, hi):
    with pytest.raises(ValueError):
        BoxDomain(lo, hi)


def test_negative_degree_rejected():
    with pytest.raises(ValueError):
        ChebBasis(BoxDomain.unit(2), -1)


boxes = st.integers(1, 3).flatmap(
    lambda d: st.tuples(
        st.lists(st.floats(-10, 10), min_size=d, max_size=d),
        st.lists(st.floats(0.01, 10), min_size=d, max_size=d),
    )
)


@settings(max_examples=60, deadline=None)
@given(boxes, st.integers(0, 2**31 - 1))
def test_reference_map_roundtrip(params, seed):
    lo, width = params
    box = BoxDomain(tuple(lo), tuple(a + w for a, w in zip(lo, width)))
    pts = box.from_reference(np.random.default_rng(seed).uniform(-1, 1, (8, box.dim)))
    assert box.contains(pts, tol=1e-12).all()
    np.testing.assert_allclose(box.from_reference(box.to_reference(pts)), pts, atol=1e-12)
    assert BoxDomain.from_dict(box.to_dict()) == box


def test_contains_box():
    outer = BoxDomain((0.0, 0.0), (1.0, 1.0))
    assert outer.contains_box(BoxDomain((0.2, 0.0), (1.0, 0.5)))
    assert not outer.contains_box(BoxDomain((-1e-9, 0.0), (1.0, 0.5)))
    assert outer.contains_box(BoxDomain((-1e-13, 0.0), (1.0, 0.5)), tol=1e-12)
