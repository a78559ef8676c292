"""Positive auxiliary rules: tensor Gauss-Chebyshev on boxes and Gauss-Legendre on [-1, 1]."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .cheb import BoxDomain, ChebBasis


@dataclass(frozen=True, eq=False)
class QuadRule:
    """Nodes ``(M, d)``, strictly positive weights ``(M,)`` and the claimed degree of exactness."""

    nodes: np.ndarray
    weights: np.ndarray
    ade: int
    box: BoxDomain
    kind: str = "generic"

    def __post_init__(self):
        nodes = np.atleast_2d(np.asarray(self.nodes, dtype=float))
        weights = np.asarray(self.weights, dtype=float).ravel()
        if nodes.shape[0] != weights.shape[0]:
            raise ValueError("node and weight counts differ")
        if nodes.shape[1] != self.box.dim:
            raise ValueError("node dimension does not match the box")
        if not np.all(weights > 0):
            raise ValueError("auxiliary rule weights must be strictly positive")
        for a in (nodes, weights):
            a.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self) -> int:
        return self.weights.shape[0]

    def integrate(self, f) -> float:
        return float(self.weights @ np.asarray(f(self.nodes), dtype=float))


@lru_cache(maxsize=None)
def _chebyshev_reference(dim: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    i = np.arange(1, n + 2)
    t = np.cos((2 * i - 1) * np.pi / (2 * (n + 1)))
    nodes = np.array(list(product(t, repeat=dim)))
    weights = np.full(nodes.shape[0], (np.pi / (n + 1)) ** dim)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_chebyshev_box(box: BoxDomain, n: int) -> QuadRule:
    """Tensor Gauss-Chebyshev rule with ``(n+1)^d`` nodes, exact in total degree ``2n``.

    Nodes on the reference cube are box-independent and cached per ``(d, n)``.
    """
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    ref_nodes, weights = _chebyshev_reference(box.dim, int(n))
    return QuadRule(box.from_reference(ref_nodes), weights, 2 * int(n), box, kind="gauss-chebyshev")


def _legendre_and_derivative(x: np.ndarray, q: int) -> tuple[np.ndarray, np.ndarray]:
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, q + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = q * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


@lru_cache(maxsize=None)
def _gauss_legendre_cached(q: int, tol: float, maxiter: int) -> tuple[np.ndarray, np.ndarray]:
    i = np.arange(1, q + 1)
    x = np.cos(np.pi * (i - 0.25) / (q + 0.5))
    for _ in range(maxiter):
        p, dp = _legendre_and_derivative(x, q)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) <= tol:
            break
    p, dp = _legendre_and_derivative(x, q)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    # symmetrize and sort ascending
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    x, w = x[::-1].copy(), w[::-1].copy()
    if q % 2:
        x[q // 2] = 0.0
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(q: int, tol: float = 1e-15, maxiter: int = 100) -> QuadRule:
    """``q``-point Gauss-Legendre rule on ``[-1, 1]`` by Newton iteration on ``P_q``."""
    if q < 1:
        raise ValueError(f"Gauss-Legendre needs at least one point, got {q}")
    x, w = _gauss_legendre_cached(int(q), tol, maxiter)
    return QuadRule(x[:, None], w, 2 * int(q) - 1, BoxDomain((-1.0,), (1.0,)), kind="gauss-legendre")


def gram_residual(rule: QuadRule, basis: ChebBasis) -> float:
    """``max |V^t D V - I|`` for the basis sampled at the rule nodes."""
    V = basis.vandermonde(rule.nodes)
    G = V.T @ (rule.weights[:, None] * V)
    return float(np.max(np.abs(G - np.eye(basis.size))))


def verify_rule_exactness(rule: QuadRule, basis: ChebBasis) -> float:
    if rule.ade < 2 * basis.degree:
        raise ValueError(
            f"rule of degree {rule.ade} cannot resolve products of a degree-{basis.degree} basis"
        )
    return gram_residual(rule, basis)
