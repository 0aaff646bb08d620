"""Benchmark harness comparing solver methods against the exact oracle.

Rows are keyed by (instance id, method) and fully reproducible from the
recorded seeds; the CSV carries only deterministic columns, while the JSON
report additionally records wall-clock timings.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field

from .config import Config
from .errors import CapacityError, CutkitError
from .graph import cut_value
from .io import read_instance
from .matroid import PartitionMatroid, solve_matroid
from .oracle import oracle_constrained
from .rounding import RoundingParams, greedy_feasible, solve_multi

METHODS = ("sdp", "pipage", "greedy", "oracle")

CSV_HEADER = "instance,method,value,oracle_value,ratio,feasible,seed"


@dataclass
class BenchRow:
    instance: str
    method: str
    value: float | None
    oracle_value: float | None
    feasible: bool
    seed: int
    wall_time_s: float
    skipped: str = ""

    @property
    def ratio(self) -> float | None:
        if self.value is None or not self.oracle_value:
            return None
        return self.value / self.oracle_value

    def csv_line(self) -> str:
        if self.skipped:
            return (
                f"{self.instance},{self.method},skipped,skipped,,false,{self.seed}"
            )
        ratio = "" if self.ratio is None else f"{self.ratio!r}"
        return (
            f"{self.instance},{self.method},{self.value!r},"
            f"{self.oracle_value!r},{ratio},"
            f"{'true' if self.feasible else 'false'},{self.seed}"
        )

    def to_json_dict(self):
        return {
            "instance": self.instance,
            "method": self.method,
            "value": self.value,
            "oracle_value": self.oracle_value,
            "ratio": self.ratio,
            "feasible": self.feasible,
            "seed": self.seed,
            "wall_time_s": self.wall_time_s,
            "skipped": self.skipped or None,
        }


@dataclass
class BenchReport:
    rows: list = field(default_factory=list)

    def aggregates(self):
        out = {}
        for method in sorted({r.method for r in self.rows}):
            ratios = [
                r.ratio
                for r in self.rows
                if r.method == method and r.ratio is not None and not r.skipped
            ]
            out[method] = {
                "rows": sum(1 for r in self.rows if r.method == method),
                "min_ratio": min(ratios) if ratios else None,
                "mean_ratio": sum(ratios) / len(ratios) if ratios else None,
            }
        return out

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        lines.extend(r.csv_line() for r in self.rows)
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        obj = {
            "schema": "cutkit-bench/1",
            "rows": [r.to_json_dict() for r in self.rows],
            "aggregates": self.aggregates(),
        }
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _run_method(inst, matroid, method, eps, seed, config):
    if method == "oracle":
        res = oracle_constrained(inst, config=config)
        return res.opt_value, res.best_set, True
    if method == "greedy":
        chosen = greedy_feasible(inst.graph, inst.parts, inst.budgets)
        return cut_value(inst.graph, chosen), chosen, inst.is_feasible_set(chosen)
    if method == "pipage":
        m = matroid or PartitionMatroid(inst.graph.n, inst.parts, inst.budgets)
        sol = solve_matroid(inst.graph, m, config)
        return sol.value, sol.set, sol.feasible
    if method == "sdp":
        params = RoundingParams(eps=eps, trials=config.trials, rng_seed=seed)
        sol = solve_multi(inst, eps, params, config)
        return sol.value, sol.set, inst.is_feasible_set(sol.set)
    raise CutkitError(f"unknown method {method!r}")


def run_bench(
    corpus_dir: str,
    methods,
    seeds,
    eps: float = 0.5,
    config: Config | None = None,
) -> BenchReport:
    """Run every (instance, method, seed) combination; capacity errors mark
    the row skipped instead of aborting the run."""
    config = config or Config()
    report = BenchReport()
    names = sorted(
        f
        for f in os.listdir(corpus_dir)
        if f.endswith((".txt", ".json")) and not f.startswith(".")
    )
    for name in names:
        path = os.path.join(corpus_dir, name)
        inst, matroid = read_instance(path)
        oracle_value = None
        try:
            oracle_value = oracle_constrained(inst, config=config).opt_value
        except CutkitError:
            pass
        for method in methods:
            for seed in seeds:
                t0 = time.perf_counter()
                try:
                    value, _, feasible = _run_method(
                        inst, matroid, method, eps, seed, config
                    )
                    row = BenchRow(
                        instance=name,
                        method=method,
                        value=value,
                        oracle_value=oracle_value,
                        feasible=feasible,
                        seed=seed,
                        wall_time_s=time.perf_counter() - t0,
                    )
                except CapacityError as exc:
                    row = BenchRow(
                        instance=name,
                        method=method,
                        value=None,
                        oracle_value=oracle_value,
                        feasible=False,
                        seed=seed,
                        wall_time_s=time.perf_counter() - t0,
                        skipped=str(exc),
                    )
                report.rows.append(row)
    report.rows.sort(key=lambda r: (r.instance, r.method, r.seed))
    return report
