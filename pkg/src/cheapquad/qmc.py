"""Quasi-Monte Carlo discrete measures on CSG domains and their compression."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cheb import BoxDomain, ChebBasis
from .compress import MomentVector, SignedRule, compress
from .csg import Domain
from .rules import gauss_chebyshev_box

PRIMES = (2, 3, 5)
DEFAULT_POINTS = 100_000
REFERENCE_POINTS = 1_000_000
_CHUNK = 8192


def radical_inverse(indices, base: int) -> np.ndarray:
    """Van der Corput radical inverse of nonnegative integers in ``base``.

    Digits are reversed into an integer numerator over ``base**ndigits`` and
    divided once, so each value is the correctly rounded rational.
    """
    i = np.asarray(indices, dtype=np.int64).copy()
    num = np.zeros_like(i)
    den = np.ones_like(i)
    while np.any(i > 0):
        active = i > 0
        num = np.where(active, num * base + i % base, num)
        den = np.where(active, den * base, den)
        i //= base
    return num / den


def halton(box: BoxDomain, K: int, start: int = 1) -> np.ndarray:
    """Points ``start, ..., start+K-1`` of the plain Halton sequence mapped into ``box``."""
    if K < 1:
        raise ValueError(f"need at least one point, got {K}")
    idx = np.arange(start, start + K, dtype=np.int64)
    unit = np.column_stack([radical_inverse(idx, b) for b in PRIMES[: box.dim]])
    lo, hi = np.asarray(box.lo), np.asarray(box.hi)
    return lo + (hi - lo) * unit


@dataclass(frozen=True, eq=False)
class PointCloud:
    """The ``L`` Halton points inside the domain, each weighted ``vol(B) / K``."""

    points: np.ndarray
    per_point_weight: float
    box: BoxDomain
    total_generated: int

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def mass(self) -> float:
        return self.per_point_weight * len(self)

    def integrate(self, f) -> float:
        vals = np.asarray(f(self.points), dtype=float)
        return self.per_point_weight * float(vals.sum())


def qmc_measure(domain: Domain, box: BoxDomain, K: int = DEFAULT_POINTS, seed: int = 0) -> PointCloud:
    pts = halton(box, K)
    inside = domain.contains(pts, seed=seed)
    if not inside.any():
        raise ValueError(f"no Halton point of {K} falls in the domain; check the box {box}")
    sel = pts[inside]
    sel.setflags(write=False)
    return PointCloud(sel, box.volume() / K, box, K)


def qmc_moments(cloud: PointCloud, basis: ChebBasis) -> MomentVector:
    """``m_j = (vol(B)/K) * sum_i p_j(Q_i)``.

    Each chunk of points is reduced by numpy's pairwise summation along a
    contiguous axis; chunk partial sums are then added in index order.
    """
    if basis.box != cloud.box:
        raise ValueError("basis box differs from the cloud box")
    m = np.zeros(basis.size)
    for i in range(0, len(cloud), _CHUNK):
        m += np.ascontiguousarray(basis.vandermonde(cloud.points[i : i + _CHUNK]).T).sum(axis=1)
    return MomentVector(cloud.per_point_weight * m, basis)


def compress_cloud(cloud: PointCloud, n: int) -> SignedRule:
    basis = ChebBasis(cloud.box, n)
    return compress(qmc_moments(cloud, basis), gauss_chebyshev_box(cloud.box, n))


def compress_qmc(
    domain: Domain, box: BoxDomain | None = None, K: int = DEFAULT_POINTS, n: int = 10, seed: int = 0
) -> SignedRule:
    """Signed rule with ``(n+1)^3`` nodes reproducing the QMC integral of every polynomial of degree ``n``."""
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    box = domain.bounding_box() if box is None else box
    return compress_cloud(qmc_measure(domain, box, K, seed), n)
