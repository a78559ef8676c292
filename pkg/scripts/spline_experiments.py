"""Exactness, test-function, stability and timing tables for the two harness spline elements.

    python3 scripts/spline_experiments.py --out results/spline

Writes one CSV per table into the output directory.
"""

from __future__ import annotations

import argparse
import csv
from dataclasses import asdict, dataclass, field
from pathlib import Path

from cheapquad import cli, harness
from cheapquad.spline import compress_element, gauss_green_integrate


@dataclass
class SplineExperimentConfig:
    ades: list[int] = field(default_factory=lambda: list(range(2, 17, 2)))
    elements: tuple[str, ...] = ("element_a", "element_b")
    trials: int = 100
    seed: int = 0
    reference_ade: int = 30
    bench_repeats: int = 100
    out: Path = Path("results/spline")


def _write(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    print(f"wrote {path}")


def run(cfg: SplineExperimentConfig) -> None:
    cfg.out.mkdir(parents=True, exist_ok=True)
    exact, funcs, stab, bench = [], [], [], []
    for name in cfg.elements:
        el = getattr(harness, name)()
        ref_rule = compress_element(el, cfg.reference_ade)
        fs = harness.integrands(2)
        refs = {k: ref_rule.integrate(f) for k, f in fs.items()}
        for n in cfg.ades:
            rule = compress_element(el, n)
            rep = harness.polynomial_trials(
                lambda f, n, r=rule: r.integrate(f), lambda f, n: gauss_green_integrate(el, f, n), 2, n, cfg.trials, cfg.seed
            )
            exact.append([name, n, len(rule), cfg.trials, cfg.seed, rep.geometric_mean, max(rep.errors)])
            for k, f in fs.items():
                funcs.append([name, k, n, rule.integrate(f), refs[k], abs(rule.integrate(f) - refs[k]) / abs(refs[k])])
            stab.append([name, n, len(rule), rule.stability, rule.onenorm, float(rule.weights.sum())])
        source = str(harness.data_path(f"{name}.json"))
        for row in cli.cmd_bench(source, "spline", cfg.ades, cfg.bench_repeats):
            bench.append([name] + [row[c] for c in cli.BENCH_COLUMNS])
    _write(cfg.out / "exactness.csv", ["element", "ade", "nodes", "trials", "seed", "geometric_mean", "max_error"], exact)
    _write(cfg.out / "test_functions.csv", ["element", "function", "ade", "value", "reference", "relative_error"], funcs)
    _write(cfg.out / "stability.csv", ["element", "ade", "nodes", "stability", "onenorm", "weight_sum"], stab)
    _write(cfg.out / "timings.csv", ["element"] + cli.BENCH_COLUMNS, bench)
    (cfg.out / "config.txt").write_text(repr(asdict(cfg)) + "\n")


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", type=Path, default=SplineExperimentConfig.out)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=100, help="timing repeats per degree")
    a = p.parse_args()
    run(SplineExperimentConfig(trials=a.trials, seed=a.seed, bench_repeats=a.repeats, out=a.out))


if __name__ == "__main__":
    main()
