"""Acceptance gate: one test per criterion, each reporting PASS/FAIL in the terminal summary."""

import math
import time
import warnings

import numpy as np
import pytest

from cheapquad import harness
from cheapquad.cheb import BoxDomain, ChebBasis, christoffel_square_bound
from cheapquad.compress import MomentVector, cauchy_schwarz_bound, christoffel_max, compress
from cheapquad.csg import Ball
from cheapquad.qmc import REFERENCE_POINTS, compress_cloud, compress_qmc, qmc_measure, qmc_moments, radical_inverse
from cheapquad.rules import gauss_chebyshev_box, gauss_legendre, verify_rule_exactness
from cheapquad.spline import SplineElement, compress_element, gauss_green_integrate, greens_moments

EVEN = list(range(2, 17, 2))
QMC_POINTS = 100_000


def moving_average3(values):
    v = np.asarray(values, dtype=float)
    return (v[:-2] + v[1:-1] + v[2:]) / 3.0


def two_significant_figures_agree(a: float, b: float) -> bool:
    """``a`` rounds to the same two significant figures as ``b`` (half a unit in the second digit)."""
    return abs(a - b) <= 0.5 * 10.0 ** (math.floor(math.log10(abs(b))) - 1)


@pytest.fixture(scope="module")
def spline_rules():
    els = {"element_a": harness.element_a(), "element_b": harness.element_b()}
    return {name: (el, {n: compress_element(el, n) for n in EVEN}) for name, el in els.items()}


@pytest.fixture(scope="module")
def qmc_rules():
    out = {}
    for name, dom in (("omega3", harness.omega3()), ("omega4", harness.omega4())):
        box = dom.bounding_box()
        cloud = qmc_measure(dom, box, QMC_POINTS)
        out[name] = (dom, cloud, {n: compress_cloud(cloud, n) for n in EVEN})
    return out


def test_orthogonality_identity(record_criterion):
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    worst = 0.0
    for dim in (2, 3):
        for n in range(17):
            for _ in range(2):
                lo = rng.uniform(-5, 5, dim)
                box = BoxDomain(tuple(lo), tuple(lo + rng.uniform(0.01, 10, dim)))
                worst = max(worst, verify_rule_exactness(gauss_chebyshev_box(box, n), ChebBasis(box, n)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed < 10
    record_criterion(1, ok, f"max |V^tDV - I| = {worst:.2e} (<= 1e-12), {elapsed:.1f} s (< 10 s)")
    assert ok


def test_spline_exactness(record_criterion, spline_rules):
    t0 = time.perf_counter()
    worst = 0.0
    for el, rules in spline_rules.values():
        for n, rule in rules.items():
            rep = harness.polynomial_trials(
                lambda f, n, r=rule: r.integrate(f), lambda f, n, e=el: gauss_green_integrate(e, f, n), 2, n, 100, seed=n
            )
            worst = max(worst, rep.geometric_mean)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed < 30
    record_criterion(2, ok, f"worst geometric mean {worst:.2e} (<= 1e-12), {elapsed:.1f} s (< 30 s)")
    assert ok


def test_rule_cardinalities(record_criterion, spline_rules, qmc_rules):
    bad = []
    for name, (_, rules) in spline_rules.items():
        bad += [(name, n) for n, r in rules.items() if len(r) != (n + 1) ** 2 or r.nodes.shape != ((n + 1) ** 2, 2)]
    for name, (_, _, rules) in qmc_rules.items():
        bad += [(name, n) for n, r in rules.items() if len(r) != (n + 1) ** 3]
    direct = compress_qmc(harness.omega3(), n=10, K=QMC_POINTS)
    if len(direct) != 1331:
        bad.append(("compress_qmc", 10))
    record_criterion(3, not bad, f"(n+1)^d nodes for every rule; compress_qmc n=10 -> {len(direct)}")
    assert not bad


def test_onenorm_bound(record_criterion):
    rng = np.random.default_rng(4)
    t0 = time.perf_counter()
    worst = -math.inf
    for _ in range(1000):
        dim = int(rng.integers(2, 4))
        n = int(rng.integers(0, 11 if dim == 2 else 8))
        lo = rng.uniform(-3, 3, dim)
        box = BoxDomain(tuple(lo), tuple(lo + rng.uniform(0.05, 4, dim)))
        basis = ChebBasis(box, n)
        m = MomentVector(rng.normal(size=basis.size), basis)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            rule = compress(m, gauss_chebyshev_box(box, n))
        worst = max(worst, rule.onenorm - cauchy_schwarz_bound(m))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed < 30
    record_criterion(4, ok, f"max ||w||_1 - sqrt(lambda)||m||_2 = {worst:.2e} (<= 1e-12), {elapsed:.1f} s")
    assert ok


def test_stability_bands(record_criterion, spline_rules, qmc_rules):
    parts, ok = [], True
    for name, (_, rules) in spline_rules.items():
        s = [rules[n].stability for n in EVEN]
        ok &= all(1.0 <= v <= 1.5 for v in s)
        parts.append(f"{name} {min(s):.3f}-{max(s):.3f}")
    for name, (_, _, rules) in qmc_rules.items():
        s = [rules[n].stability for n in EVEN]
        ma = moving_average3(s)
        trend = bool(np.all(np.diff(ma) <= 0.0))
        ok &= all(1.0 <= v <= 2.0 for v in s) and trend
        parts.append(f"{name} {s[0]:.3f}->{s[-1]:.3f} trend {'ok' if trend else 'broken'}")
    record_criterion(5, ok, "; ".join(parts))
    assert ok


def test_christoffel_bound(record_criterion):
    worst = -math.inf
    for n in range(1, 17):
        basis = ChebBasis(BoxDomain.unit(2), n)
        worst = max(worst, math.sqrt(christoffel_max(basis, 101)) - christoffel_square_bound(n))
    ok = worst <= 1e-10
    record_criterion(6, ok, f"max(grid sqrt K_n - bound) = {worst:.2e} (<= 1e-10)")
    assert ok


def test_qmc_fidelity(record_criterion, qmc_rules):
    t0 = time.perf_counter()
    worst = 0.0
    for _, cloud, rules in qmc_rules.values():
        for n, rule in rules.items():
            rep = harness.polynomial_trials(
                lambda f, n, r=rule: r.integrate(f), lambda f, n, c=cloud: c.integrate(f), 3, n, 100, seed=n
            )
            worst = max(worst, rep.geometric_mean)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-11 and elapsed < 120
    record_criterion(7, ok, f"worst geometric mean {worst:.2e} (<= 1e-11), {elapsed:.1f} s (< 120 s)")
    assert ok


def test_compression_saturation(record_criterion, qmc_rules):
    ok, parts = True, []
    for name, (dom, cloud, rules) in qmc_rules.items():
        ref_cloud = qmc_measure(dom, cloud.box, REFERENCE_POINTS)
        fs = harness.integrands(3, harness.SINGULAR_POINT_3D[name])
        worst = 0.0
        for fname, f in fs.items():
            ref = ref_cloud.integrate(f)
            e_qmc = abs(cloud.integrate(f) - ref) / abs(ref)
            for n in (12, 14, 16):
                e_ch = abs(rules[n].integrate(f) - ref) / abs(ref)
                ok &= two_significant_figures_agree(e_ch, e_qmc)
                worst = max(worst, abs(e_ch - e_qmc) / e_qmc)
        parts.append(f"{name} worst relative gap {worst:.2e}")
    record_criterion(8, ok, "; ".join(parts) + " (two significant figures)")
    assert ok


def test_moment_oracles(record_criterion):
    square = SplineElement.polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
    c = lambda k: 1 / math.sqrt(math.pi) if k == 0 else math.sqrt(2 / math.pi)  # noqa: E731
    I = lambda k: 0.0 if k % 2 else 2.0 / (1.0 - k * k)  # noqa: E731,E741
    worst_sq = 0.0
    for n in range(11):
        basis = ChebBasis(BoxDomain((0.0, 0.0), (1.0, 1.0)), n)
        exact = np.array([0.25 * c(a) * c(b) * I(a) * I(b) for a, b in basis.order])
        worst_sq = max(worst_sq, float(np.max(np.abs(greens_moments(square, basis).values - exact))))
    dom = harness.omega3()
    cloud = qmc_measure(dom, dom.bounding_box(), QMC_POINTS)
    basis = ChebBasis(cloud.box, 16)
    V = basis.vandermonde(cloud.points)
    exact = np.array([math.fsum(V[:, j]) for j in range(basis.size)]) * cloud.per_point_weight
    worst_q = float(np.max(np.abs(qmc_moments(cloud, basis).values - exact)))
    ok = worst_sq <= 1e-13 and worst_q <= 1e-12
    record_criterion(9, ok, f"square {worst_sq:.2e} (<= 1e-13), QMC vs fsum {worst_q:.2e} (<= 1e-12)")
    assert ok


def test_fixed_point(record_criterion):
    rng = np.random.default_rng(10)
    worst = 0.0
    for dim in (2, 3):
        for n in range(17):
            lo = rng.uniform(-4, 4, dim)
            box = BoxDomain(tuple(lo), tuple(lo + rng.uniform(0.1, 5, dim)))
            rule = gauss_chebyshev_box(box, n)
            w = compress(MomentVector.of_auxiliary(ChebBasis(box, n)), rule).weights
            worst = max(worst, float(np.max(np.abs(w - rule.weights))))
    ok = worst <= 1e-13
    record_criterion(10, ok, f"max |w - u| = {worst:.2e} (<= 1e-13)")
    assert ok


def test_known_values(record_criterion):
    r2, r3 = gauss_legendre(2), gauss_legendre(3)
    gl = max(
        np.max(np.abs(r2.nodes[:, 0] - [-1 / math.sqrt(3), 1 / math.sqrt(3)])),
        np.max(np.abs(r2.weights - 1.0)),
        np.max(np.abs(r3.nodes[:, 0] - [-math.sqrt(0.6), 0.0, math.sqrt(0.6)])),
        np.max(np.abs(r3.weights - [5 / 9, 8 / 9, 5 / 9])),
    )
    halton_ok = radical_inverse(np.arange(1, 8), 2).tolist() == [0.5, 0.25, 0.75, 0.125, 0.625, 0.375, 0.875]
    halton_ok &= radical_inverse(np.arange(1, 9), 3).tolist() == [1 / 3, 2 / 3, 1 / 9, 4 / 9, 7 / 9, 2 / 9, 5 / 9, 8 / 9]
    ball = Ball((0.0, 0.0, 0.0), 1.0)
    vol_err = abs(qmc_measure(ball, ball.bounding_box(), QMC_POINTS).mass - 4 * math.pi / 3)
    ok = gl <= 1e-15 and halton_ok and vol_err <= 5e-3
    record_criterion(11, ok, f"GL error {gl:.1e} (<= 1e-15), Halton rationals {'exact' if halton_ok else 'wrong'}, "
                             f"ball volume error {vol_err:.2e} (<= 5e-3)")
    assert ok
