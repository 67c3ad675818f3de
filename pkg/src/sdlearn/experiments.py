"""Solve, verify and benchmark runs producing machine-readable reports."""

from __future__ import annotations

import csv
import io
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .bruteforce import MAX_SEQUENCE_N, TooLarge, best_sequence_exhaustive
from .generate import GeneratorConfig, generate
from .instance import Instance
from .learner import BudgetExceeded, InconsistentState, SolveResult, solve
from .oracle import Oracle


def _enc(x):
    return x if isinstance(x, int) else str(x)


def run(instance: Instance) -> SolveResult:
    return solve(Oracle(instance))


def solve_report(instance: Instance, result: SolveResult) -> dict:
    n = instance.n
    cases = Counter(ev.kind for ev in result.events)
    return {
        "n": n,
        "sequence": list(result.sequence),
        "welfare": _enc(result.welfare),
        "queries": result.queries,
        "bound_n4": n ** 4,
        "bound_n5": n ** 5,
        "iterations": len(result.events),
        "cases": dict(sorted(cases.items())),
    }


def verify(instance: Instance, max_n: int = MAX_SEQUENCE_N) -> dict:
    """Cross-check the learner against exhaustive search over all n! sequences."""
    if instance.n > max_n:
        raise TooLarge(f"n = {instance.n} exceeds --max-n {max_n}")
    report = best_sequence_exhaustive(instance)
    out = {"n": instance.n, "best_welfare": _enc(report.best_welfare),
           "max_matching_weight": _enc(report.max_matching_weight)}
    try:
        result = run(instance)
    except (BudgetExceeded, InconsistentState) as exc:
        out.update({"pass": False, "error": f"{type(exc).__name__}: {exc}"})
        return out
    in_optimal = tuple(result.sequence) in set(report.optimal_sequences)
    out.update({
        "sequence": list(result.sequence),
        "welfare": _enc(result.welfare),
        "queries": result.queries,
        "within_n5": result.queries <= instance.n ** 5,
        "welfare_matches": result.welfare == report.best_welfare,
        "sequence_is_optimal": in_optimal,
    })
    out["pass"] = out["welfare_matches"] and in_optimal and out["within_n5"]
    return out


@dataclass
class BenchRecord:
    n: int
    family: str
    seed: int
    queries_used: int
    bound_n5: int
    bound_n4: int
    welfare: object
    optimal: bool | None = None


def bench_one(config: GeneratorConfig, check: bool = False) -> BenchRecord:
    inst = generate(config)
    result = run(inst)
    optimal = None
    if check:
        optimal = result.welfare == best_sequence_exhaustive(inst).best_welfare
    return BenchRecord(config.n, config.family, config.seed, result.queries,
                       config.n ** 5, config.n ** 4, _enc(result.welfare), optimal)


def _bench_args(args):
    return bench_one(*args)


def bench(ns, families, seeds, check: bool = False, jobs: int = 1, **gen_kwargs) -> list[BenchRecord]:
    tasks = [(GeneratorConfig(n, fam, s, **gen_kwargs), check and n <= MAX_SEQUENCE_N)
             for n in ns for fam in families for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            return list(pool.map(_bench_args, tasks, chunksize=4))
    return [bench_one(*t) for t in tasks]


def bench_csv(records: list[BenchRecord]) -> str:
    buf = io.StringIO()
    fields = list(BenchRecord.__dataclass_fields__)
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        row = asdict(rec)
        row["optimal"] = "" if rec.optimal is None else str(rec.optimal).lower()
        writer.writerow(row)
    return buf.getvalue()


def bench_summary(records: list[BenchRecord]) -> dict:
    """Worst queries/n^4 and queries/n^5 ratios per family (floats, reporting only)."""
    out: dict = {}
    for rec in records:
        s = out.setdefault(rec.family, {"runs": 0, "max_ratio_n4": 0.0, "max_ratio_n5": 0.0,
                                        "over_n5": 0, "not_optimal": 0})
        s["runs"] += 1
        s["max_ratio_n4"] = max(s["max_ratio_n4"], round(rec.queries_used / rec.bound_n4, 6))
        s["max_ratio_n5"] = max(s["max_ratio_n5"], round(rec.queries_used / rec.bound_n5, 6))
        s["over_n5"] += rec.queries_used > rec.bound_n5
        s["not_optimal"] += rec.optimal is False
    return dict(sorted(out.items()))
