"""Verification harness: packaged geometries, test integrands and random-polynomial trials."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .csg import Domain, domain_from_dict
from .spline import SplineElement

# zero errors are mapped to this floor before taking logs
ERROR_FLOOR = 1e-17

SINGULAR_POINT_2D = (0.0, 0.0)
SINGULAR_POINT_3D = {"omega3": (0.51, 0.26, 0.63), "omega4": (0.21, 0.36, 0.51)}


def _load_json(name: str):
    return json.loads(resources.files("cheapquad.data").joinpath(name).read_text())


def data_path(name: str):
    return resources.files("cheapquad.data").joinpath(name)


def element_a() -> SplineElement:
    """Nonconvex element: four linear sides and one cubic side."""
    return SplineElement.from_dict(_load_json("element_a.json")).oriented()


def element_b() -> SplineElement:
    """Convex element in [0, 1]^2: six linear sides and one cubic side."""
    return SplineElement.from_dict(_load_json("element_b.json")).oriented()


def omega3() -> Domain:
    """Unit ball intersected with a nonconvex 20-vertex star polyhedron."""
    return domain_from_dict(_load_json("omega3.json"))


def omega4() -> Domain:
    """Union of five radius-0.5 balls with centers in the unit cube."""
    return domain_from_dict(_load_json("omega4.json"))


def star5() -> Domain:
    """Five-ball union whose overlap graph is a star, so all triple intersections are empty."""
    return domain_from_dict(_load_json("star5.json"))


def lens_volume(d: float, r: float) -> float:
    """Volume of the intersection of two balls of radius ``r`` at center distance ``d``."""
    if d >= 2 * r:
        return 0.0
    return math.pi * (4 * r + d) * (2 * r - d) ** 2 / 12.0


def union_volume_pairwise(centers, r: float) -> float:
    """Inclusion-exclusion volume of equal balls, valid when no three of them share a point."""
    c = np.asarray(centers, dtype=float)
    vol = len(c) * 4.0 / 3.0 * math.pi * r**3
    for i in range(len(c)):
        for j in range(i + 1, len(c)):
            vol -= lens_volume(float(np.linalg.norm(c[i] - c[j])), r)
    return vol


def geometric_mean(errors, floor: float = ERROR_FLOOR) -> float:
    e = np.maximum(np.asarray(errors, dtype=float), floor)
    return float(np.exp(np.mean(np.log(e))))


def random_power(coeffs, n: int):
    """``(c_0 + c_1 x + ... + c_d x_d)^n`` as a vectorized callable."""
    c = np.asarray(coeffs, dtype=float)

    def f(p):
        return (c[0] + np.asarray(p) @ c[1:]) ** n

    return f


def integrands(dim: int, center=None) -> dict:
    """Entire ``f1`` and the two radial powers with derivative singularities at ``center``."""
    if center is None:
        center = SINGULAR_POINT_2D if dim == 2 else SINGULAR_POINT_3D["omega3"]
    c = np.asarray(center, dtype=float)

    def f1(p):
        return np.exp(-np.sum(np.asarray(p) ** 2, axis=1))

    def f2(p):
        return np.sum((np.asarray(p) - c) ** 2, axis=1) ** 5.5

    def f3(p):
        return np.sum((np.asarray(p) - c) ** 2, axis=1) ** 1.5

    return {"f1": f1, "f2": f2, "f3": f3}


@dataclass
class TrialReport:
    ade: int
    trials: int
    seed: int
    errors: list[float]
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def geometric_mean(self) -> float:
        return geometric_mean(self.errors)

    def to_csv(self) -> str:
        lines = ["trial,ade,seed,relative_error"]
        lines += [f"{k},{self.ade},{self.seed},{e:.17g}" for k, e in enumerate(self.errors)]
        lines.append(f"geometric_mean,{self.ade},{self.seed},{self.geometric_mean:.17g}")
        return "\n".join(lines) + "\n"


def polynomial_trials(rule_integrate, reference_integrate, dim: int, n: int, trials: int = 100, seed: int = 0) -> TrialReport:
    """Relative errors of ``rule_integrate`` against ``reference_integrate`` on random ``(c . [1, x])^n``.

    Both arguments take a callable ``f`` and an exactness degree and return an
    integral; coefficients are uniform in ``(0, 1)`` from ``numpy.random.default_rng(seed)``.
    """
    rng = np.random.default_rng(seed)
    errors = []
    t_rule = t_ref = 0.0
    for _ in range(trials):
        f = random_power(rng.uniform(0.0, 1.0, dim + 1), n)
        t0 = time.perf_counter()
        ref = reference_integrate(f, n)
        t1 = time.perf_counter()
        val = rule_integrate(f, n)
        t2 = time.perf_counter()
        t_ref += t1 - t0
        t_rule += t2 - t1
        errors.append(abs(val - ref) / abs(ref))
    return TrialReport(n, trials, seed, errors, {"reference": t_ref, "rule": t_rule})
