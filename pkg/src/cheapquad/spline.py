"""Planar elements bounded by closed chains of interpolating spline arcs.

Each side is parameterized on ``t = 0, 1, ..., m-1`` at its knots and stored
piecewise: piece ``k`` holds power-basis coefficients in the local variable
``s = t - k`` in ``[0, 1]``.  Domain integrals are turned into contour integrals
with an x-antiderivative, ``int_Omega f = oint F dy`` with ``dF/dx = f``, and
evaluated exactly on each polynomial piece by Gauss-Legendre quadrature.
"""

from __future__ import annotations

import json
import logging
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.interpolate import CubicSpline

from .cheb import BoxDomain, ChebBasis
from .compress import MomentVector, SignedRule, compress
from .rules import gauss_chebyshev_box, gauss_legendre

log = logging.getLogger(__name__)

CLOSURE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SplineArcSide:
    """One side: knots ``(m, 2)``, effective piece degree and coefficients ``(m-1, degree+1, 2)``.

    ``spline_degree`` is the requested spline type (1 or 3); ``degree`` can be
    lower when a cubic side has too few knots.
    """

    knots: np.ndarray
    degree: int
    pieces: np.ndarray
    spline_degree: int

    @property
    def start(self) -> np.ndarray:
        return self.knots[0]

    @property
    def end(self) -> np.ndarray:
        return self.knots[-1]

    def __call__(self, t) -> np.ndarray:
        """Evaluate the side at global parameters ``t`` in ``[0, m-1]``."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        k = np.clip(np.floor(t).astype(int), 0, len(self.pieces) - 1)
        s = t - k
        c = self.pieces[k]  # (P, deg+1, 2)
        powers = s[:, None] ** np.arange(self.degree + 1)
        return np.einsum("pd,pdc->pc", powers, c)

    def reversed(self) -> "SplineArcSide":
        return build_spline_side(self.knots[::-1], self.spline_degree)


def build_spline_side(knots, degree: int) -> SplineArcSide:
    """Linear (chords) or not-a-knot cubic spline side through ``knots``."""
    knots = np.array(knots, dtype=float)
    if knots.ndim != 2 or knots.shape[1] != 2 or knots.shape[0] < 2:
        raise ValueError("a side needs at least two planar knots")
    if not np.all(np.isfinite(knots)):
        raise ValueError("knots must be finite")
    if np.any(np.all(np.diff(knots, axis=0) == 0.0, axis=1)):
        raise ValueError("repeated consecutive knots")
    if degree not in (1, 3):
        raise ValueError(f"unsupported spline degree {degree}; use 1 or 3")
    m = knots.shape[0]
    if degree == 1:
        pieces = np.stack([knots[:-1], knots[1:] - knots[:-1]], axis=1)
        return SplineArcSide(_frozen(knots), 1, _frozen(pieces), 1)
    if m < 4:
        warnings.warn(
            f"cubic side with {m} knots degenerates to degree {m - 1}", RuntimeWarning, stacklevel=2
        )
        degree = m - 1
    sp = CubicSpline(np.arange(m, dtype=float), knots, bc_type="not-a-knot")
    # scipy stores descending powers of (t - t_k): c[power, piece, coord]
    pieces = sp.c[::-1].transpose(1, 0, 2)[:, : degree + 1].copy()
    pieces[:, 0] = knots[:-1]
    return SplineArcSide(_frozen(knots), degree, _frozen(pieces), 3)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SplineElement:
    """Closed chain of spline sides, last knot of each side equal to the first of the next."""

    sides: tuple[SplineArcSide, ...]

    def __post_init__(self):
        sides = tuple(self.sides)
        if not sides:
            raise ValueError("an element needs at least one side")
        scale = max(1.0, max(float(np.max(np.abs(s.knots))) for s in sides))
        for k, side in enumerate(sides):
            nxt = sides[(k + 1) % len(sides)]
            gap = float(np.max(np.abs(side.end - nxt.start)))
            if gap > CLOSURE_TOL * scale:
                raise ValueError(f"side {k} does not close onto side {(k + 1) % len(sides)} (gap {gap:.3g})")
        object.__setattr__(self, "sides", sides)

    @property
    def vertices(self) -> np.ndarray:
        return np.array([s.start for s in self.sides])

    def signed_area(self) -> float:
        return gauss_green_integrate(self, lambda p: np.ones(len(p)), 0)

    def reversed(self) -> "SplineElement":
        return SplineElement(tuple(s.reversed() for s in reversed(self.sides)))

    def oriented(self) -> "SplineElement":
        """The same element traversed counterclockwise."""
        if self.signed_area() < 0:
            log.warning("element boundary is clockwise; reversing side and knot order")
            return self.reversed()
        return self

    def to_dict(self) -> dict:
        return {
            "sides": [
                {"degree": s.spline_degree, "knots": s.knots.tolist()} for s in self.sides
            ]
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SplineElement":
        try:
            sides = data["sides"]
            return cls(tuple(build_spline_side(s["knots"], int(s["degree"])) for s in sides))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed element description: {exc}") from exc

    @classmethod
    def polygon(cls, vertices) -> "SplineElement":
        v = np.asarray(vertices, dtype=float)
        return cls(tuple(build_spline_side([v[k], v[(k + 1) % len(v)]], 1) for k in range(len(v))))


def load_element(path, orient: bool = True) -> SplineElement:
    with open(path) as fh:
        element = SplineElement.from_dict(json.load(fh))
    return element.oriented() if orient else element


def save_element(element: SplineElement, path) -> None:
    Path(path).write_text(json.dumps(element.to_dict(), indent=1))


def boundary_quadrature(element: SplineElement, degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Points and ``dy`` weights exact for ``oint F dy`` with ``F`` a polynomial of degree ``degree``.

    On a piece of degree ``delta`` the integrand ``F(phi, psi) psi'`` has degree
    ``delta * (degree + 1) - 1``, so ``ceil(delta * (degree + 1) / 2)`` points suffice.
    """
    pts, wts = [], []
    for side in element.sides:
        d = side.degree
        q = max(1, math.ceil(d * (degree + 1) / 2))
        gl = gauss_legendre(q)
        s = 0.5 * (gl.nodes[:, 0] + 1.0)
        u = 0.5 * gl.weights
        P = s[:, None] ** np.arange(d + 1)
        dP = np.zeros_like(P)
        dP[:, 1:] = np.arange(1, d + 1) * s[:, None] ** np.arange(d)
        for c in side.pieces:
            pts.append(P @ c)
            wts.append(u * (dP @ c[:, 1]))
    return np.concatenate(pts), np.concatenate(wts)


def _piece_extrema(c: np.ndarray) -> list[float]:
    vals = [float(npoly.polyval(0.0, c)), float(npoly.polyval(1.0, c))]
    dc = npoly.polyder(c)
    if len(dc) > 1 and np.any(dc[1:] != 0):
        for r in npoly.polyroots(np.trim_zeros(dc, "b")):
            if abs(r.imag) < 1e-14 and 0.0 < r.real < 1.0:
                vals.append(float(npoly.polyval(r.real, c)))
    return vals


def bounding_box(element: SplineElement) -> BoxDomain:
    """Exact coordinate extremes of the boundary curve."""
    lo, hi = [math.inf, math.inf], [-math.inf, -math.inf]
    for side in element.sides:
        for c in side.pieces:
            for k in range(2):
                vals = _piece_extrema(c[:, k])
                lo[k] = min(lo[k], *vals)
                hi[k] = max(hi[k], *vals)
    return BoxDomain(tuple(lo), tuple(hi))


def gauss_green_integrate(element: SplineElement, f, degree: int, x0: float | None = None) -> float:
    """Integral over the element of a polynomial ``f`` of total degree ``<= degree``.

    The x-antiderivative ``F(x, y) = int_{x0}^x f(s, y) ds`` is computed by
    Gauss-Legendre in ``s``; both quadratures are exact for polynomials of the
    stated degree.  ``f`` maps an ``(P, 2)`` array to ``P`` values.
    """
    pts, dy = boundary_quadrature(element, degree + 1)
    if x0 is None:
        x0 = float(np.mean(element.vertices[:, 0]))
    gl = gauss_legendre(max(1, math.ceil((degree + 1) / 2)))
    s, u = gl.nodes[:, 0], gl.weights
    half = 0.5 * (pts[:, 0] - x0)
    F = np.zeros(len(pts))
    for sg, ug in zip(s, u):
        xs = x0 + half * (sg + 1.0)
        F += ug * np.asarray(f(np.column_stack([xs, pts[:, 1]])), dtype=float)
    F *= half
    return float(F @ dy)


def greens_moments(element: SplineElement, basis: ChebBasis) -> MomentVector:
    """Lebesgue moments ``m_j = oint P_j dy`` of the Chebyshev basis over the element.

    The sign convention assumes a counterclockwise boundary; a clockwise one
    negates every moment.
    """
    if basis.dim != 2:
        raise ValueError("spline element moments need a planar basis")
    ebox = bounding_box(element)
    tol = 1e-12 * max(1.0, float(np.max(np.abs(ebox.lo + ebox.hi))))
    if not basis.box.contains_box(ebox, tol):
        raise ValueError(f"basis box {basis.box} does not contain the element box {ebox}")
    pts, dy = boundary_quadrature(element, basis.degree + 1)
    W = basis.antiderivative_vandermonde(pts)
    return MomentVector(dy @ W, basis)


def compress_element(element: SplineElement, n: int, box: BoxDomain | None = None) -> SignedRule:
    """Signed rule with ``(n+1)^2`` Gauss-Chebyshev nodes in the element box, exact in degree ``n``."""
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    element = element.oriented()
    box = bounding_box(element) if box is None else box
    basis = ChebBasis(box, n)
    rule = gauss_chebyshev_box(box, n)
    return compress(greens_moments(element, basis), rule)
