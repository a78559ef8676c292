"""Signed moment-matching compression ``w = D V m`` and its stability bounds.

Given moments ``m_j`` of a measure ``mu`` against an orthonormal basis of the
auxiliary measure, and a positive rule ``(X, u)`` exact in degree ``2n`` for
that auxiliary measure, the weights ``w_i = u_i * sum_j p_j(x_i) m_j`` match
every moment.  There is no linear solve: ``D^{1/2} V`` has orthonormal columns.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cheb import BoxDomain, ChebBasis
from .rules import QuadRule, _chebyshev_reference

STABILITY_WARNING_THRESHOLD = 10.0


@dataclass(frozen=True, eq=False)
class MomentVector:
    values: np.ndarray
    basis: ChebBasis

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).ravel()
        if values.shape[0] != self.basis.size:
            raise ValueError(f"expected {self.basis.size} moments, got {values.shape[0]}")
        if not np.all(np.isfinite(values)):
            raise ValueError("moments must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    @classmethod
    def of_auxiliary(cls, basis: ChebBasis) -> "MomentVector":
        """Moments of the auxiliary measure itself: ``(sqrt(mass), 0, ..., 0)``."""
        m = np.zeros(basis.size)
        m[0] = math.sqrt(basis.mass)
        return cls(m, basis)


@dataclass(frozen=True, eq=False)
class SignedRule:
    """Quadrature rule with possibly negative weights and its diagnostics."""

    nodes: np.ndarray
    weights: np.ndarray
    ade: int
    moment_residual: float
    onenorm: float
    stability: float
    basis: ChebBasis
    moments: MomentVector

    def __len__(self) -> int:
        return self.weights.shape[0]

    @property
    def box(self) -> BoxDomain:
        return self.basis.box

    def integrate(self, f) -> float:
        return float(self.weights @ np.asarray(f(self.nodes), dtype=float))


@lru_cache(maxsize=32)
def _reference_vandermonde(dim: int, n_rule: int, n_basis: int) -> np.ndarray:
    ref_nodes, _ = _chebyshev_reference(dim, n_rule)
    V = ChebBasis(BoxDomain.unit(dim), n_basis).vandermonde(ref_nodes)
    V.setflags(write=False)
    return V


def rule_vandermonde(rule: QuadRule, basis: ChebBasis) -> np.ndarray:
    """Basis sampled at the rule nodes.

    For tensor Gauss-Chebyshev rules the matrix does not depend on the box, so
    it is built once per ``(d, n)`` on the reference cube and reused.
    """
    if rule.kind == "gauss-chebyshev":
        return _reference_vandermonde(rule.box.dim, rule.ade // 2, basis.degree)
    return basis.vandermonde(rule.nodes)


def _compensated_matvec(V: np.ndarray, m: np.ndarray) -> np.ndarray:
    return np.array([math.fsum(row) for row in V * m])


def compress(m: MomentVector, rule: QuadRule, *, compensated: bool = False) -> SignedRule:
    """Signed rule on the nodes of ``rule`` reproducing the moments ``m``.

    Parameters
    ----------
    m : MomentVector
        Moments of the target measure against ``m.basis``.
    rule : QuadRule
        Positive rule for the auxiliary measure, exact in degree ``2 * m.basis.degree``.
    compensated : bool
        Accumulate each weight with ``math.fsum`` instead of a BLAS product.
    """
    basis = m.basis
    if rule.box != basis.box:
        raise ValueError("auxiliary rule and basis live on different boxes")
    if rule.ade < 2 * basis.degree:
        raise ValueError(f"rule of degree {rule.ade} is not exact in degree {2 * basis.degree}")
    V = rule_vandermonde(rule, basis)
    Vm = _compensated_matvec(V, m.values) if compensated else V @ m.values
    w = rule.weights * Vm
    w.setflags(write=False)
    residual = float(np.max(np.abs(V.T @ w - m.values)))
    onenorm = float(np.sum(np.abs(w)))
    total = float(np.sum(w))
    stability = onenorm / abs(total) if total != 0.0 else math.inf
    if stability > STABILITY_WARNING_THRESHOLD and onenorm > 0:
        warnings.warn(
            f"stability parameter {stability:.3g} exceeds {STABILITY_WARNING_THRESHOLD}; "
            "the measure may not be supported inside the box",
            RuntimeWarning,
            stacklevel=2,
        )
    return SignedRule(rule.nodes, w, basis.degree, residual, onenorm, stability, basis, m)


def stability_parameter(rule: SignedRule) -> float:
    """``||w||_1 / |sum w|``; raises when the weights sum to zero."""
    w = np.asarray(rule.weights if hasattr(rule, "weights") else rule, dtype=float)
    total = float(np.sum(w))
    if total == 0.0:
        raise ZeroDivisionError("weights sum to zero; the compressed measure has no mass")
    return float(np.sum(np.abs(w))) / abs(total)


def cauchy_schwarz_bound(m: MomentVector) -> float:
    """Upper bound ``sqrt(lambda(B)) * ||m||_2`` of the weight 1-norm."""
    return math.sqrt(m.basis.mass) * m.norm()


def _grid(box: BoxDomain, resolution: int) -> np.ndarray:
    axes = [np.linspace(a, b, resolution) for a, b in zip(box.lo, box.hi)]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, box.dim)


def christoffel_max(basis: ChebBasis, grid_resolution: int, chunk: int = 20000) -> float:
    """Max of ``K_n(x, x)`` on a uniform grid of the box (a lower bound of the true max)."""
    pts = _grid(basis.box, grid_resolution)
    return max(float(np.max(basis.christoffel(pts[i : i + chunk]))) for i in range(0, len(pts), chunk))


def christoffel_bound(mu_mass: float, basis: ChebBasis, grid_resolution: int = 101) -> float:
    """``sqrt(lambda(B)) * mu(Omega) * sqrt(max K_n)``, the max estimated on a grid."""
    if mu_mass < 0:
        raise ValueError("measure mass must be nonnegative")
    return math.sqrt(basis.mass) * mu_mass * math.sqrt(christoffel_max(basis, grid_resolution))


def density_bound(omega2_over_sigma_l1: float, lambda_mass: float) -> float:
    """``sqrt(lambda(B)) * sqrt(||omega^2 / sigma||_{L^1(Omega)})`` for absolutely continuous measures."""
    if omega2_over_sigma_l1 < 0 or lambda_mass < 0:
        raise ValueError("density bound inputs must be nonnegative")
    return math.sqrt(lambda_mass) * math.sqrt(omega2_over_sigma_l1)


@dataclass(frozen=True)
class ErrorBudget:
    en_estimate: float
    moment_error: float
    sample_error: float
    f_l2_norm: float
    mu_mass: float
    w_onenorm: float
    lambda_mass: float
    total: float
    approx_total: float

    @property
    def cross_term(self) -> float:
        """Products-of-errors part of ``total`` dropped by ``approx_total``."""
        return math.sqrt(self.lambda_mass) * (self.en_estimate + self.sample_error) * self.moment_error


def error_budget(
    en_estimate: float,
    moment_error: float,
    sample_error: float,
    f_l2_norm: float,
    mu_mass: float,
    w_onenorm: float,
    lambda_mass: float,
) -> ErrorBudget:
    """Cumulative bound on ``|int f dmu - <w~, f~>|`` from approximation, sampling and moment errors.

    ``en_estimate`` is the best uniform approximation error of ``f`` on the box
    in total degree ``n``; it is supplied by the caller.
    """
    args = (en_estimate, moment_error, sample_error, f_l2_norm, mu_mass, w_onenorm, lambda_mass)
    if any(a < 0 for a in args):
        raise ValueError("error budget inputs must be nonnegative")
    base = (mu_mass + w_onenorm) * en_estimate + w_onenorm * sample_error
    total = base + (f_l2_norm + math.sqrt(lambda_mass) * (en_estimate + sample_error)) * moment_error
    approx_total = base + f_l2_norm * moment_error
    return ErrorBudget(*args, total=total, approx_total=approx_total)
