"""Command-line front end.

    cheapquad compress-spline --element F --ade N --out F
    cheapquad compress-qmc --csg F --points K --ade N --seed S --out F
    cheapquad verify --rule F --source F --trials T --seed S
    cheapquad test-functions --rule F --source F --family {2d,3d}
    cheapquad report-stability F [F ...]
    cheapquad bench (--element F | --csg F) --ade-list 2,4,6 --repeats R

Exit status is 0 on success, 2 on invalid input and 1 on internal errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import statistics
import sys
import time
from pathlib import Path

import numpy as np

from . import harness
from .cheb import BoxDomain, ChebBasis
from .compress import christoffel_bound, compress, rule_vandermonde, _reference_vandermonde
from .csg import load_domain
from .qmc import DEFAULT_POINTS, REFERENCE_POINTS, compress_cloud, qmc_measure, qmc_moments
from .rulefile import RuleFile, file_sha256
from .rules import _chebyshev_reference, gauss_chebyshev_box
from .spline import bounding_box, compress_element, gauss_green_integrate, greens_moments, load_element

log = logging.getLogger("cheapquad")


class ValidationError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _parse_box(values) -> BoxDomain | None:
    if values is None:
        return None
    d = len(values) // 2
    return BoxDomain(tuple(values[:d]), tuple(values[d:]))


def cmd_compress_spline(element: str, ade: int, out: str) -> RuleFile:
    el = load_element(element)
    rule = compress_element(el, ade)
    rf = RuleFile.from_rule(rule, {"kind": "spline", "source_sha256": file_sha256(element), "seed": None})
    rf.write(out)
    return rf


def cmd_compress_qmc(csg: str, points: int, ade: int, out: str, seed: int = 0, box=None) -> RuleFile:
    domain = load_domain(csg)
    box = domain.bounding_box() if box is None else box
    cloud = qmc_measure(domain, box, points, seed)
    rule = compress_cloud(cloud, ade)
    rf = RuleFile.from_rule(
        rule,
        {
            "kind": "qmc",
            "source_sha256": file_sha256(csg),
            "points": points,
            "points_in_domain": len(cloud),
            "seed": seed,
        },
    )
    rf.write(out)
    return rf


def _check_source(rf: RuleFile, source: str) -> None:
    digest = rf.provenance.get("source_sha256")
    if digest and digest != file_sha256(source):
        raise ValidationError(f"{source} is not the geometry this rule was built from")


def _rule_cloud(rf: RuleFile, source: str, points: int | None = None):
    domain = load_domain(source)
    K = int(rf.provenance["points"]) if points is None else points
    return qmc_measure(domain, rf.box, K, int(rf.provenance.get("seed") or 0))


def cmd_verify(rule: str, source: str, trials: int = 100, seed: int = 0) -> harness.TrialReport:
    rf = RuleFile.read(rule)
    _check_source(rf, source)
    kind = rf.provenance.get("kind")
    if kind == "spline":
        if rf.dim != 2:
            raise ValidationError("spline rules must be planar")
        el = load_element(source)
        reference = lambda f, n: gauss_green_integrate(el, f, n)  # noqa: E731
    elif kind == "qmc":
        if rf.dim != 3:
            raise ValidationError("QMC rules must be three-dimensional")
        cloud = _rule_cloud(rf, source)
        reference = lambda f, n: cloud.integrate(f)  # noqa: E731
    else:
        raise ValidationError(f"unknown rule provenance kind {kind!r}")
    return harness.polynomial_trials(lambda f, n: rf.integrate(f), reference, rf.dim, rf.ade, trials, seed)


def cmd_reverify(rule: str, source: str) -> float:
    """Recompute the moments from the geometry and return ``max |V^t w - m|``."""
    rf = RuleFile.read(rule)
    _check_source(rf, source)
    basis = rf.basis
    if rf.provenance.get("kind") == "spline":
        m = greens_moments(load_element(source), basis).values
    else:
        m = qmc_moments(_rule_cloud(rf, source), basis).values
    return rf.moment_residual(m)


def cmd_testfunctions(rule: str, source: str, family: str, center=None, reference_points: int = REFERENCE_POINTS) -> list[dict]:
    """Relative errors of the rule on the three test integrands.

    2d: reference is the element's own degree-30 rule.  3d: reference is the
    QMC sum with ``reference_points`` Halton points in the same box; the QMC
    errors of the rule's own point cloud are reported alongside.
    """
    rf = RuleFile.read(rule)
    _check_source(rf, source)
    if family not in ("2d", "3d") or int(family[0]) != rf.dim:
        raise ValidationError(f"family {family!r} does not match a {rf.dim}D rule")
    if center is None and rf.dim == 3:
        center = harness.SINGULAR_POINT_3D.get(Path(source).stem, harness.SINGULAR_POINT_3D["omega3"])
    fs = harness.integrands(rf.dim, center)
    rows = []
    if family == "2d":
        ref_rule = compress_element(load_element(source), 30)
        for name, f in fs.items():
            ref = ref_rule.integrate(f)
            val = rf.integrate(f)
            rows.append({"function": name, "ade": rf.ade, "value": val, "reference": ref,
                         "relative_error": abs(val - ref) / abs(ref), "qmc_relative_error": ""})
    else:
        ref_cloud = _rule_cloud(rf, source, reference_points)
        cloud = _rule_cloud(rf, source)
        for name, f in fs.items():
            ref = ref_cloud.integrate(f)
            val = rf.integrate(f)
            rows.append({"function": name, "ade": rf.ade, "value": val, "reference": ref,
                         "relative_error": abs(val - ref) / abs(ref),
                         "qmc_relative_error": abs(cloud.integrate(f) - ref) / abs(ref)})
    return rows


STABILITY_COLUMNS = ["file", "dimension", "ade", "cardinality", "weight_sum", "onenorm", "stability",
                     "cauchy_schwarz_bound", "cauchy_schwarz_slack", "christoffel_bound", "christoffel_slack"]


def cmd_report_stability(files, grid_resolution: int = 41) -> list[dict]:
    rows = []
    for path in files:
        rf = RuleFile.read(path)
        w = rf.weights
        onenorm = float(np.sum(np.abs(w)))
        total = float(np.sum(w))
        cs = math.sqrt(math.pi**rf.dim) * float(np.linalg.norm(rf.moments))
        ch = christoffel_bound(abs(total), rf.basis, grid_resolution)
        rows.append({
            "file": str(path), "dimension": rf.dim, "ade": rf.ade, "cardinality": len(w),
            "weight_sum": total, "onenorm": onenorm,
            "stability": onenorm / abs(total) if total else math.inf,
            "cauchy_schwarz_bound": cs, "cauchy_schwarz_slack": cs - onenorm,
            "christoffel_bound": ch, "christoffel_slack": ch - onenorm,
        })
    return rows


BENCH_COLUMNS = ["ade", "cardinality", "basis_size", "repeats", "setup_s", "geometry_s", "moments_s", "weights_s", "element_s"]


def cmd_bench(source: str, kind: str, ades, repeats: int = 100, points: int = DEFAULT_POINTS,
              include_setup: bool = True) -> list[dict]:
    """Median stage timings per degree; setup is the reference Chebyshev rule and Vandermonde matrix."""
    rows = []
    domain = load_domain(source) if kind == "qmc" else None
    element = load_element(source) if kind == "spline" else None
    dim = 3 if kind == "qmc" else 2
    for n in ades:
        setup = ""
        if include_setup:
            _chebyshev_reference.cache_clear()
            _reference_vandermonde.cache_clear()
            t0 = time.perf_counter()
            _reference_vandermonde(dim, n, n)
            setup = time.perf_counter() - t0
        else:
            _reference_vandermonde(dim, n, n)
        stages = {"geometry_s": [], "moments_s": [], "weights_s": []}
        for _ in range(repeats):
            t0 = time.perf_counter()
            if kind == "spline":
                box = bounding_box(element)
            else:
                box = domain.bounding_box()
                cloud = qmc_measure(domain, box, points)
            t1 = time.perf_counter()
            basis = ChebBasis(box, n)
            m = greens_moments(element, basis) if kind == "spline" else qmc_moments(cloud, basis)
            t2 = time.perf_counter()
            rule = compress(m, gauss_chebyshev_box(box, n))
            t3 = time.perf_counter()
            stages["geometry_s"].append(t1 - t0)
            stages["moments_s"].append(t2 - t1)
            stages["weights_s"].append(t3 - t2)
        med = {k: statistics.median(v) for k, v in stages.items()}
        rows.append({"ade": n, "cardinality": len(rule), "basis_size": basis.size, "repeats": repeats,
                     "setup_s": setup, **med, "element_s": sum(med.values())})
    return rows


def _rows_csv(columns, rows) -> str:
    return _csv(columns, [[r[c] for c in columns] for r in rows])


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cheapquad", description="Signed moment-compressed quadrature rules.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("compress-spline", help="compress Lebesgue measure on a spline element")
    s.add_argument("--element", required=True)
    s.add_argument("--ade", type=int, required=True)
    s.add_argument("--out", required=True)

    s = sub.add_parser("compress-qmc", help="compress a QMC rule on a CSG domain")
    s.add_argument("--csg", required=True)
    s.add_argument("--points", type=int, default=DEFAULT_POINTS)
    s.add_argument("--ade", type=int, required=True)
    s.add_argument("--seed", type=int, default=0, help="seed of the ray-retry generator")
    s.add_argument("--box", type=float, nargs=6, metavar=("XLO", "YLO", "ZLO", "XHI", "YHI", "ZHI"))
    s.add_argument("--out", required=True)

    s = sub.add_parser("verify", help="random-polynomial exactness trials")
    s.add_argument("--rule", required=True)
    s.add_argument("--source", required=True)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")

    s = sub.add_parser("test-functions", help="relative errors on the smooth and singular test integrands")
    s.add_argument("--rule", required=True)
    s.add_argument("--source", required=True)
    s.add_argument("--family", choices=["2d", "3d"], required=True)
    s.add_argument("--center", type=float, nargs="+", help="singular point of f2, f3")
    s.add_argument("--reference-points", type=int, default=REFERENCE_POINTS)
    s.add_argument("--out")

    s = sub.add_parser("report-stability", help="stability parameters and bound slacks")
    s.add_argument("files", nargs="+")
    s.add_argument("--grid", type=int, default=41, help="grid resolution for the Christoffel maximum")
    s.add_argument("--out")

    s = sub.add_parser("bench", help="construction timings per degree")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--element")
    g.add_argument("--csg")
    s.add_argument("--ade-list", default="2,4,6,8,10,12,14,16")
    s.add_argument("--repeats", type=int, default=100)
    s.add_argument("--points", type=int, default=DEFAULT_POINTS)
    s.add_argument("--exclude-setup", action="store_true")
    s.add_argument("--out")
    return p


def run(args) -> None:
    if args.command == "compress-spline":
        rf = cmd_compress_spline(args.element, args.ade, args.out)
        log.info("wrote %d nodes to %s", len(rf.weights), args.out)
    elif args.command == "compress-qmc":
        rf = cmd_compress_qmc(args.csg, args.points, args.ade, args.out, args.seed, _parse_box(args.box))
        log.info("wrote %d nodes to %s", len(rf.weights), args.out)
    elif args.command == "verify":
        _emit(cmd_verify(args.rule, args.source, args.trials, args.seed).to_csv(), args.out)
    elif args.command == "test-functions":
        rows = cmd_testfunctions(args.rule, args.source, args.family, args.center, args.reference_points)
        cols = ["function", "ade", "value", "reference", "relative_error", "qmc_relative_error"]
        _emit(_rows_csv(cols, rows), args.out)
    elif args.command == "report-stability":
        _emit(_rows_csv(STABILITY_COLUMNS, cmd_report_stability(args.files, args.grid)), args.out)
    elif args.command == "bench":
        ades = [int(a) for a in args.ade_list.split(",") if a.strip()]
        kind, source = ("spline", args.element) if args.element else ("qmc", args.csg)
        rows = cmd_bench(source, kind, ades, args.repeats, args.points, not args.exclude_setup)
        _emit(_rows_csv(BENCH_COLUMNS, rows), args.out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        run(args)
    except (ValidationError, ValueError, FileNotFoundError, IsADirectoryError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
