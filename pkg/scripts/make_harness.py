"""Regenerate the harness geometry files shipped in ``cheapquad/data``.

Two planar spline elements:
  element_a  nonconvex, four linear sides and one cubic side
  element_b  convex, six linear sides and one cubic side, inside [0, 1]^2
Three CSG domains:
  omega3     unit ball intersected with a nonconvex star polyhedron (20 vertices)
  omega4     union of five balls of radius 0.5 with centers in [0, 1]^3
  star5      five-ball union whose balls overlap only pairwise (closed-form volume)
"""

from pathlib import Path

import numpy as np
from scipy.spatial import ConvexHull

from cheapquad.csg import Ball, Intersection, Polyhedron, Union, save_domain
from cheapquad.spline import SplineElement, build_spline_side, save_element

DATA = Path(__file__).resolve().parents[1] / "src" / "cheapquad" / "data"


def element_a() -> SplineElement:
    v = [(-0.5, -0.6), (0.6, -0.6), (0.6, 0.5), (0.1, 0.1), (-0.2, 0.6)]
    sides = [build_spline_side([v[k], v[k + 1]], 1) for k in range(4)]
    sides.append(build_spline_side([v[4], (-0.55, 0.4), (-0.75, 0.0), (-0.7, -0.35), v[0]], 3))
    return SplineElement(tuple(sides))


def element_b() -> SplineElement:
    v = [(0.0, 0.0), (0.55, 0.0), (0.9, 0.2), (1.0, 0.55), (0.85, 0.85), (0.5, 1.0), (0.15, 0.9)]
    sides = [build_spline_side([v[k], v[k + 1]], 1) for k in range(6)]
    # knots on the circle through v[6] tangent to the y-axis at the origin
    radius = (0.15**2 + 0.9**2) / (2 * 0.15)
    theta = np.arcsin(0.9 / radius) * np.linspace(1.0, 0.0, 5)
    arc = np.column_stack([radius * (1 - np.cos(theta)), radius * np.sin(theta)])
    arc[0], arc[-1] = v[6], v[0]
    sides.append(build_spline_side(np.round(arc, 15), 3))
    return SplineElement(tuple(sides))


def dodecahedron_directions() -> np.ndarray:
    g = (1 + 5**0.5) / 2
    v = [(a, b, c) for a in (-1, 1) for b in (-1, 1) for c in (-1, 1)]
    for a in (-1, 1):
        for b in (-1, 1):
            v += [(0, a / g, b * g), (a / g, b * g, 0), (a * g, 0, b / g)]
    v = np.array(v, dtype=float)
    return v / np.linalg.norm(v, axis=1)[:, None]


def star_polyhedron(center, r_in=0.45, r_out=1.0) -> Polyhedron:
    """Radially modulated dodecahedron: star-shaped about ``center``, hence a simple closed surface."""
    d = dodecahedron_directions()
    facets = ConvexHull(d).simplices.copy()
    for k, t in enumerate(facets):
        a, b, c = d[t]
        if np.dot(np.cross(b - a, c - a), a) < 0:
            facets[k] = t[[0, 2, 1]]
    radii = np.where(np.arange(len(d)) % 3 == 0, r_in, r_out)
    return Polyhedron(np.round(np.asarray(center) + d * radii[:, None], 15), facets)


def omega3():
    return Intersection((Ball((0.0, 0.0, 0.0), 1.0), star_polyhedron((0.3, 0.15, 0.25))))


OMEGA4_CENTERS = [(0.04, 0.36, 0.16), (1.0, 0.14, 0.24), (0.36, 0.06, 0.87), (0.64, 0.16, 0.5), (0.08, 0.61, 0.23)]
STAR5_CENTERS = [(0.45, 0.5, 0.55), (0.0, 0.0, 0.0), (1.0, 1.0, 0.0), (1.0, 0.0, 1.0), (0.0, 1.0, 1.0)]


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    save_element(element_a(), DATA / "element_a.json")
    save_element(element_b(), DATA / "element_b.json")
    save_domain(omega3(), DATA / "omega3.json")
    save_domain(Union(tuple(Ball(c, 0.5) for c in OMEGA4_CENTERS)), DATA / "omega4.json")
    save_domain(Union(tuple(Ball(c, 0.5) for c in STAR5_CENTERS)), DATA / "star5.json")
    print(f"wrote harness files to {DATA}")


if __name__ == "__main__":
    main()
