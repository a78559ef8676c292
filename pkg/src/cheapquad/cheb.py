"""Orthonormal product Chebyshev bases on boxes.

The auxiliary measure on a box ``B`` is the pushforward of the product
Chebyshev measure ``prod_k dt_k / sqrt(1 - t_k^2)`` under the affine map
``[-1, 1]^d -> B``.  Its mass is ``pi^d`` whatever the size of the box, and the
univariate orthonormal family is

    tau_0 = 1 / sqrt(pi),    tau_m = sqrt(2 / pi) * T_m   (m >= 1).

Basis functions are products ``p_j(x) = prod_k tau_{i_k}(xhat_k)`` indexed by
multi-indices of total degree at most ``n``, in graded lexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import comb, pi, sqrt

import numpy as np

TAU0 = 1.0 / sqrt(pi)
TAUM = sqrt(2.0 / pi)


@dataclass(frozen=True)
class BoxDomain:
    """Axis-aligned box ``[lo_1, hi_1] x ... x [lo_d, hi_d]`` with ``d <= 3``."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        if len(lo) != len(hi) or not 1 <= len(lo) <= 3:
            raise ValueError(f"box bounds must have equal length in 1..3, got {lo}, {hi}")
        if not all(np.isfinite(lo + hi)):
            raise ValueError("box bounds must be finite")
        if any(a >= b for a, b in zip(lo, hi)):
            raise ValueError(f"degenerate box: lo={lo}, hi={hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def unit(cls, dim: int) -> "BoxDomain":
        return cls((-1.0,) * dim, (1.0,) * dim)

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (np.asarray(self.lo) + np.asarray(self.hi))

    @property
    def halfwidth(self) -> np.ndarray:
        return 0.5 * (np.asarray(self.hi) - np.asarray(self.lo))

    def volume(self) -> float:
        return float(np.prod(np.asarray(self.hi) - np.asarray(self.lo)))

    def to_reference(self, points) -> np.ndarray:
        """Map points of the box to ``[-1, 1]^d``."""
        pts = np.asarray(points, dtype=float)
        lo, hi = np.asarray(self.lo), np.asarray(self.hi)
        return (2.0 * pts - lo - hi) / (hi - lo)

    def from_reference(self, points) -> np.ndarray:
        """Map points of ``[-1, 1]^d`` into the box."""
        pts = np.asarray(points, dtype=float)
        return self.center + self.halfwidth * pts

    def contains(self, points, tol: float = 0.0) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        lo, hi = np.asarray(self.lo), np.asarray(self.hi)
        return np.all((pts >= lo - tol) & (pts <= hi + tol), axis=1)

    def contains_box(self, other: "BoxDomain", tol: float = 0.0) -> bool:
        return bool(
            all(a <= b + tol for a, b in zip(self.lo, other.lo))
            and all(a >= b - tol for a, b in zip(self.hi, other.hi))
        )

    def to_dict(self) -> dict:
        return {"lo": list(self.lo), "hi": list(self.hi)}

    @classmethod
    def from_dict(cls, data: dict) -> "BoxDomain":
        return cls(tuple(data["lo"]), tuple(data["hi"]))


def graded_lex_order(degree: int, dim: int) -> tuple[tuple[int, ...], ...]:
    """Multi-indices of total degree ``<= degree``, sorted by degree then lexicographically."""
    idx = [e for e in product(range(degree + 1), repeat=dim) if sum(e) <= degree]
    idx.sort(key=lambda e: (sum(e), e))
    return tuple(idx)


def chebyshev_table(t, degree: int) -> np.ndarray:
    """``T_0(t), ..., T_degree(t)`` by the three-term recurrence, shape ``t.shape + (degree+1,)``."""
    t = np.asarray(t, dtype=float)
    out = np.empty(t.shape + (degree + 1,))
    out[..., 0] = 1.0
    if degree >= 1:
        out[..., 1] = t
    for m in range(2, degree + 1):
        out[..., m] = 2.0 * t * out[..., m - 1] - out[..., m - 2]
    return out


def tau_table(t, degree: int) -> np.ndarray:
    """Orthonormal Chebyshev values ``tau_m(t)``, ``m = 0..degree``."""
    out = chebyshev_table(t, degree)
    out[..., 0] *= TAU0
    out[..., 1:] *= TAUM
    return out


def tau_antiderivative_table(t, degree: int) -> np.ndarray:
    """Antiderivatives in ``t`` of ``tau_m``, ``m = 0..degree``, with the Chebyshev-form constants dropped.

    Uses ``int T_0 = T_1``, ``int T_1 = T_2 / 4`` and
    ``int T_m = T_{m+1} / (2(m+1)) - T_{m-1} / (2(m-1))`` for ``m >= 2``.
    """
    T = chebyshev_table(t, degree + 1)
    out = np.empty(T.shape[:-1] + (degree + 1,))
    out[..., 0] = TAU0 * T[..., 1]
    if degree >= 1:
        out[..., 1] = TAUM * T[..., 2] / 4.0
    for m in range(2, degree + 1):
        out[..., m] = TAUM * (T[..., m + 1] / (2.0 * (m + 1)) - T[..., m - 1] / (2.0 * (m - 1)))
    return out


def _tau_antiderivative_coeffs(m: int) -> np.ndarray:
    """Chebyshev coefficients (in ``T_0..T_{m+1}``) of the antiderivative of ``tau_m`` on ``[-1, 1]``."""
    c = np.zeros(m + 2)
    if m == 0:
        c[1] = TAU0
    elif m == 1:
        c[2] = TAUM / 4.0
    else:
        c[m + 1] = TAUM / (2.0 * (m + 1))
        c[m - 1] = -TAUM / (2.0 * (m - 1))
    return c


@dataclass(frozen=True)
class AntiderivativeX:
    """``P_j(x, y) = scale * A(xhat) * tau_{i2}(yhat)`` with ``A = sum_k coeffs[k] T_k``.

    ``scale`` is the half-width of the box in ``x``, so that ``dP_j/dx = p_j``.
    """

    index: int
    exponents: tuple[int, ...]
    coeffs: np.ndarray
    scale: float

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class ChebBasis:
    """Graded-lex ordered orthonormal Chebyshev basis of total degree ``degree`` on ``box``."""

    box: BoxDomain
    degree: int
    order: tuple[tuple[int, ...], ...] = field(init=False, repr=False)

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 0:
            raise ValueError(f"degree must be a nonnegative integer, got {self.degree}")
        object.__setattr__(self, "degree", int(self.degree))
        object.__setattr__(self, "order", graded_lex_order(self.degree, self.box.dim))

    @property
    def dim(self) -> int:
        return self.box.dim

    @property
    def size(self) -> int:
        return comb(self.degree + self.dim, self.dim)

    @property
    def mass(self) -> float:
        """Total mass of the auxiliary measure, ``pi ** dim``."""
        return pi**self.dim

    @cached_property
    def exponents(self) -> np.ndarray:
        return np.array(self.order, dtype=np.intp).reshape(-1, self.dim)

    def _as_points(self, points) -> tuple[np.ndarray, bool]:
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        if pts.shape[-1] != self.dim:
            raise ValueError(f"expected points of dimension {self.dim}, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        return pts, single

    def vandermonde(self, points) -> np.ndarray:
        """Matrix ``V[i, j] = p_j(x_i)`` of shape ``(M, N)``."""
        pts, _ = self._as_points(points)
        xhat = self.box.to_reference(pts)
        V = np.ones((pts.shape[0], self.size))
        for k in range(self.dim):
            tab = tau_table(xhat[:, k], self.degree)
            V *= tab[:, self.exponents[:, k]]
        return V

    def eval(self, point) -> np.ndarray:
        pts, single = self._as_points(point)
        V = self.vandermonde(pts)
        return V[0] if single else V

    def christoffel(self, points) -> np.ndarray | float:
        """Christoffel polynomial ``K_n(x, x) = sum_j p_j(x)^2``."""
        pts, single = self._as_points(points)
        V = self.vandermonde(pts)
        K = np.einsum("ij,ij->i", V, V)
        return float(K[0]) if single else K

    def antiderivative_x(self, j: int) -> AntiderivativeX:
        if not 0 <= j < self.size:
            raise IndexError(f"basis index {j} out of range 0..{self.size - 1}")
        e = self.order[j]
        return AntiderivativeX(j, e, _tau_antiderivative_coeffs(e[0]), float(self.box.halfwidth[0]))

    def antiderivative_vandermonde(self, points) -> np.ndarray:
        """Matrix ``W[i, j] = P_j(x_i)`` of x-antiderivatives (planar bases only)."""
        if self.dim != 2:
            raise ValueError("x-antiderivatives are defined for planar bases only")
        pts, _ = self._as_points(points)
        xhat = self.box.to_reference(pts)
        ax = tau_antiderivative_table(xhat[:, 0], self.degree) * self.box.halfwidth[0]
        ty = tau_table(xhat[:, 1], self.degree)
        return ax[:, self.exponents[:, 0]] * ty[:, self.exponents[:, 1]]

    def eval_antiderivative(self, j: int, point) -> float | np.ndarray:
        if self.dim != 2:
            raise ValueError("x-antiderivatives are defined for planar bases only")
        anti = self.antiderivative_x(j)
        pts, single = self._as_points(point)
        xhat = self.box.to_reference(pts)
        a = np.polynomial.chebyshev.chebval(xhat[:, 0], anti.coeffs) * anti.scale
        vals = a * tau_table(xhat[:, 1], anti.exponents[1])[:, -1]
        return float(vals[0]) if single else vals


def eval_basis(basis: ChebBasis, point) -> np.ndarray:
    return basis.eval(point)


def christoffel(basis: ChebBasis, point):
    return basis.christoffel(point)


def christoffel_square_bound(n: int) -> float:
    """Closed-form bound of ``sqrt(max K_n)`` on ``[-1, 1]^2`` (attained at the corners)."""
    return sqrt(2 * n * n + 2 * n + 1) / pi
