"""Fidelity, test-function, stability and timing tables for QMC compression on the harness CSG domains.

    python3 scripts/qmc_experiments.py --out results/qmc

The test-function reference is a Halton sum with ``--reference-points`` points
in the same box; the full ``--points`` QMC errors are reported as ade ``qmc``.
"""

from __future__ import annotations

import argparse
import csv
from dataclasses import asdict, dataclass, field
from pathlib import Path

from cheapquad import cli, harness
from cheapquad.qmc import DEFAULT_POINTS, REFERENCE_POINTS, compress_cloud, qmc_measure


@dataclass
class QMCExperimentConfig:
    ades: list[int] = field(default_factory=lambda: list(range(2, 17, 2)))
    domains: tuple[str, ...] = ("omega3", "omega4")
    points: int = DEFAULT_POINTS
    reference_points: int = REFERENCE_POINTS
    trials: int = 100
    seed: int = 0
    bench_repeats: int = 5
    out: Path = Path("results/qmc")


def _write(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    print(f"wrote {path}")


def run(cfg: QMCExperimentConfig) -> None:
    cfg.out.mkdir(parents=True, exist_ok=True)
    fid, funcs, stab, bench = [], [], [], []
    for name in cfg.domains:
        dom = getattr(harness, name)()
        box = dom.bounding_box()
        cloud = qmc_measure(dom, box, cfg.points, cfg.seed)
        ref_cloud = qmc_measure(dom, box, cfg.reference_points, cfg.seed)
        fs = harness.integrands(3, harness.SINGULAR_POINT_3D[name])
        refs = {k: ref_cloud.integrate(f) for k, f in fs.items()}
        for k, f in fs.items():
            val = cloud.integrate(f)
            funcs.append([name, k, "qmc", len(cloud), val, refs[k], abs(val - refs[k]) / abs(refs[k])])
        for n in cfg.ades:
            rule = compress_cloud(cloud, n)
            rep = harness.polynomial_trials(
                lambda f, n, r=rule: r.integrate(f), lambda f, n: cloud.integrate(f), 3, n, cfg.trials, cfg.seed
            )
            fid.append([name, n, len(rule), len(cloud), cfg.points, cfg.trials, cfg.seed, rep.geometric_mean])
            for k, f in fs.items():
                val = rule.integrate(f)
                funcs.append([name, k, n, len(rule), val, refs[k], abs(val - refs[k]) / abs(refs[k])])
            stab.append([name, n, len(rule), rule.stability, rule.onenorm, float(rule.weights.sum())])
        source = str(harness.data_path(f"{name}.json"))
        for row in cli.cmd_bench(source, "qmc", cfg.ades, cfg.bench_repeats, cfg.points):
            bench.append([name] + [row[c] for c in cli.BENCH_COLUMNS])
    _write(cfg.out / "fidelity.csv", ["domain", "ade", "nodes", "cloud_points", "points", "trials", "seed",
                                      "geometric_mean"], fid)
    _write(cfg.out / "test_functions.csv", ["domain", "function", "ade", "nodes", "value", "reference",
                                            "relative_error"], funcs)
    _write(cfg.out / "stability.csv", ["domain", "ade", "nodes", "stability", "onenorm", "weight_sum"], stab)
    _write(cfg.out / "timings.csv", ["domain"] + cli.BENCH_COLUMNS, bench)
    (cfg.out / "config.txt").write_text(repr(asdict(cfg)) + "\n")


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", type=Path, default=QMCExperimentConfig.out)
    p.add_argument("--points", type=int, default=DEFAULT_POINTS)
    p.add_argument("--reference-points", type=int, default=REFERENCE_POINTS)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=5, help="timing repeats per degree")
    a = p.parse_args()
    run(QMCExperimentConfig(points=a.points, reference_points=a.reference_points, trials=a.trials, seed=a.seed,
                            bench_repeats=a.repeats, out=a.out))


if __name__ == "__main__":
    main()
