"""Constructive solid geometry indicator functions in 3D.

Leaves are closed balls and closed triangulated polyhedra; internal nodes are
union, intersection and difference.  ``contains`` is vectorized over points.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .cheb import BoxDomain

RAY_DIRECTION = np.array([0.2874, 0.6352, 0.7168])
DEGENERACY_TOL = 1e-12
MAX_RAY_RETRIES = 8
_CHUNK = 20000


class Domain:
    def contains(self, points, seed: int = 0) -> np.ndarray | bool:
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        if pts.shape[1] != 3:
            raise ValueError(f"expected 3D points, got shape {pts.shape}")
        inside = self._contains(pts, seed)
        return bool(inside[0]) if single else inside

    def _contains(self, pts: np.ndarray, seed: int) -> np.ndarray:
        raise NotImplementedError

    def bounding_box(self) -> BoxDomain:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Ball(Domain):
    center: tuple[float, float, float]
    radius: float

    def __post_init__(self):
        c = tuple(float(v) for v in self.center)
        if len(c) != 3 or not np.all(np.isfinite(c)):
            raise ValueError("ball center must be three finite coordinates")
        if not self.radius > 0:
            raise ValueError(f"ball radius must be positive, got {self.radius}")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))

    def _contains(self, pts, seed):
        d = pts - np.asarray(self.center)
        return np.einsum("ij,ij->i", d, d) <= self.radius**2

    def bounding_box(self) -> BoxDomain:
        c = np.asarray(self.center)
        return BoxDomain(tuple(c - self.radius), tuple(c + self.radius))

    def volume(self) -> float:
        return 4.0 / 3.0 * np.pi * self.radius**3

    def to_dict(self) -> dict:
        return {"ball": {"center": list(self.center), "radius": self.radius}}


@dataclass(frozen=True, eq=False)
class Polyhedron(Domain):
    """Closed triangulated surface; membership by ray-crossing parity."""

    vertices: np.ndarray
    facets: np.ndarray
    _tri: tuple = field(init=False, repr=False)

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        f = np.array(self.facets, dtype=np.intp)
        if v.ndim != 2 or v.shape[1] != 3 or not np.all(np.isfinite(v)):
            raise ValueError("polyhedron vertices must be finite 3D points")
        if f.ndim != 2 or f.shape[1] != 3:
            raise ValueError("polyhedron facets must be vertex-index triples")
        if f.min() < 0 or f.max() >= len(v):
            raise ValueError("facet index out of range")
        edges = Counter(tuple(sorted((int(a), int(b)))) for tri in f for a, b in zip(tri, np.roll(tri, -1)))
        bad = [e for e, k in edges.items() if k != 2]
        if bad:
            raise ValueError(f"surface is not closed: edges {bad[:5]} are not shared by exactly two facets")
        v.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "facets", f)
        v0 = v[f[:, 0]]
        object.__setattr__(self, "_tri", (v0, v[f[:, 1]] - v0, v[f[:, 2]] - v0))

    def _crossings(self, pts: np.ndarray, direction: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Crossing counts along ``direction`` and a flag for near-degenerate hits."""
        v0, e1, e2 = self._tri
        p = np.cross(direction, e2)
        det = np.einsum("tk,tk->t", e1, p)
        flat = np.abs(det) < DEGENERACY_TOL
        inv = np.where(flat, 0.0, 1.0 / np.where(flat, 1.0, det))
        s = pts[:, None, :] - v0[None, :, :]
        u = np.einsum("itk,tk->it", s, p) * inv
        q = np.cross(s, e1[None, :, :])
        v = np.einsum("itk,k->it", q, direction) * inv
        t = np.einsum("itk,tk->it", q, e2) * inv
        w = 1.0 - u - v
        front = t > 0.0
        hit = front & (u >= 0) & (v >= 0) & (w >= 0) & ~flat
        near = front & ~flat & (np.minimum(np.minimum(np.abs(u), np.abs(v)), np.abs(w)) < DEGENERACY_TOL)
        near &= (u > -DEGENERACY_TOL) & (v > -DEGENERACY_TOL) & (w > -DEGENERACY_TOL)
        # a ray lying in a facet plane is ambiguous only if it actually meets the facet
        ambiguous = near.any(axis=1)
        if flat.any():
            ambiguous |= self._meets_flat(pts, direction, flat)
        return hit.sum(axis=1), ambiguous

    def _meets_flat(self, pts, direction, flat) -> np.ndarray:
        v0, e1, e2 = (a[flat] for a in self._tri)
        n = np.cross(e1, e2)
        dist = np.einsum("itk,tk->it", pts[:, None, :] - v0[None], n) / np.linalg.norm(n, axis=1)
        return (np.abs(dist) < DEGENERACY_TOL).any(axis=1)

    def _contains(self, pts, seed):
        out = np.empty(len(pts), dtype=bool)
        rng = np.random.default_rng(seed)
        for start in range(0, len(pts), _CHUNK):
            chunk = pts[start : start + _CHUNK]
            todo = np.arange(len(chunk))
            direction = RAY_DIRECTION / np.linalg.norm(RAY_DIRECTION)
            for attempt in range(MAX_RAY_RETRIES + 1):
                count, ambiguous = self._crossings(chunk[todo], direction)
                done = ~ambiguous
                out[start + todo[done]] = count[done] % 2 == 1
                todo = todo[ambiguous]
                if todo.size == 0:
                    break
                direction = rng.normal(size=3)
                direction /= np.linalg.norm(direction)
            else:
                raise RuntimeError(
                    f"{todo.size} points remain ambiguous after {MAX_RAY_RETRIES} ray retries"
                )
        return out

    def bounding_box(self) -> BoxDomain:
        return BoxDomain(tuple(self.vertices.min(axis=0)), tuple(self.vertices.max(axis=0)))

    def volume(self) -> float:
        v0, e1, e2 = self._tri
        return float(np.einsum("tk,tk->t", v0, np.cross(e1, e2)).sum() / 6.0)

    def to_dict(self) -> dict:
        return {"polyhedron": {"vertices": self.vertices.tolist(), "facets": self.facets.tolist()}}

    @classmethod
    def box(cls, lo, hi) -> "Polyhedron":
        """Axis-aligned box as a 12-facet closed surface."""
        (x0, y0, z0), (x1, y1, z1) = lo, hi
        v = [(x0, y0, z0), (x1, y0, z0), (x1, y1, z0), (x0, y1, z0),
             (x0, y0, z1), (x1, y0, z1), (x1, y1, z1), (x0, y1, z1)]
        f = [(0, 2, 1), (0, 3, 2), (4, 5, 6), (4, 6, 7), (0, 1, 5), (0, 5, 4),
             (1, 2, 6), (1, 6, 5), (2, 3, 7), (2, 7, 6), (3, 0, 4), (3, 4, 7)]
        return cls(np.array(v), np.array(f))


@dataclass(frozen=True, eq=False)
class _Node(Domain):
    children: tuple[Domain, ...]
    op = ""

    def __post_init__(self):
        children = tuple(self.children)
        if len(children) < 1 or not all(isinstance(c, Domain) for c in children):
            raise ValueError(f"{self.op} needs at least one child domain")
        object.__setattr__(self, "children", children)

    def to_dict(self) -> dict:
        return {"op": self.op, "children": [c.to_dict() for c in self.children]}


class Union(_Node):
    op = "union"

    def _contains(self, pts, seed):
        inside = np.zeros(len(pts), dtype=bool)
        for child in self.children:
            rest = ~inside
            if rest.any():
                inside[rest] = child._contains(pts[rest], seed)
        return inside

    def bounding_box(self) -> BoxDomain:
        boxes = [c.bounding_box() for c in self.children]
        return BoxDomain(tuple(np.min([b.lo for b in boxes], axis=0)), tuple(np.max([b.hi for b in boxes], axis=0)))


class Intersection(_Node):
    op = "intersection"

    def _contains(self, pts, seed):
        inside = np.ones(len(pts), dtype=bool)
        for child in self.children:
            if inside.any():
                inside[inside] = child._contains(pts[inside], seed)
        return inside

    def bounding_box(self) -> BoxDomain:
        boxes = [c.bounding_box() for c in self.children]
        return BoxDomain(tuple(np.max([b.lo for b in boxes], axis=0)), tuple(np.min([b.hi for b in boxes], axis=0)))


class Difference(_Node):
    """First child minus the union of the others."""

    op = "difference"

    def _contains(self, pts, seed):
        inside = self.children[0]._contains(pts, seed)
        for child in self.children[1:]:
            if inside.any():
                inside[inside] = ~child._contains(pts[inside], seed)
        return inside

    def bounding_box(self) -> BoxDomain:
        return self.children[0].bounding_box()


_OPS = {"union": Union, "intersection": Intersection, "difference": Difference}


def domain_from_dict(data) -> Domain:
    if not isinstance(data, dict):
        raise ValueError(f"malformed CSG node: {data!r}")
    if "ball" in data:
        b = data["ball"]
        return Ball(tuple(b["center"]), b["radius"])
    if "polyhedron" in data:
        p = data["polyhedron"]
        return Polyhedron(np.array(p["vertices"]), np.array(p["facets"]))
    if data.get("op") in _OPS:
        return _OPS[data["op"]](tuple(domain_from_dict(c) for c in data.get("children", [])))
    raise ValueError(f"unknown CSG node with keys {sorted(data)}")


def load_domain(path) -> Domain:
    with open(path) as fh:
        try:
            return domain_from_dict(json.load(fh))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed CSG description: {exc}") from exc


def save_domain(domain: Domain, path) -> None:
    with open(path, "w") as fh:
        json.dump(domain.to_dict(), fh, indent=1)


def contains(domain: Domain, point, seed: int = 0):
    return domain.contains(point, seed)
