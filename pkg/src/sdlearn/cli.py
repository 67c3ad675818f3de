"""Command-line driver.

Exit codes: 0 success/pass, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .bruteforce import MAX_SEQUENCE_N, TooLarge
from .experiments import bench, bench_csv, bench_summary, run, solve_report, verify
from .generate import FAMILIES, GeneratorConfig, generate
from .instance import Instance, InstanceError
from .learner import BudgetExceeded, InconsistentState

OUTPUT_DIR_ENV = "SDLEARN_OUTPUT_DIR"


class InputError(Exception):
    pass


def _out_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _load(path: str) -> Instance:
    try:
        return Instance.load(path)
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None
    except InstanceError as exc:
        raise InputError(str(exc)) from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_gen(args) -> int:
    try:
        config = GeneratorConfig(args.n, args.family, args.seed, args.weight_max, args.tie_mass)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out = Path(args.out) if args.out else _out_dir() / f"{args.family}_n{args.n}_s{args.seed}.json"
    _write(out, generate(config).dumps())
    print(out)
    return 0


def cmd_solve(args) -> int:
    inst = _load(args.input)
    stem = Path(args.input).stem
    trace_out = Path(args.trace_out) if args.trace_out else _out_dir() / f"{stem}.trace.jsonl"
    result = run(inst)
    report = solve_report(inst, result)
    report["trace"] = str(trace_out)
    _write(trace_out, result.trace_jsonl())
    if args.transcript_out:
        _write(Path(args.transcript_out), result.ledger.to_jsonl())
    text = _dump(report)
    if args.report_out:
        _write(Path(args.report_out), text)
    sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    inst = _load(args.input)
    try:
        detail = verify(inst, args.max_n)
    except TooLarge as exc:
        raise InputError(str(exc)) from None
    sys.stdout.write(_dump(detail))
    return 0 if detail["pass"] else 1


def cmd_bench(args) -> int:
    families = [f.strip() for f in args.families.split(",") if f.strip()]
    unknown = [f for f in families if f not in FAMILIES]
    if unknown or args.n_from < 1 or args.n_to < args.n_from or args.seeds < 1:
        raise InputError(f"bad bench range or families {unknown}")
    try:
        records = bench(range(args.n_from, args.n_to + 1), families,
                        range(args.seed_base, args.seed_base + args.seeds),
                        check=args.check, jobs=args.jobs,
                        weight_max=args.weight_max, tie_mass=args.tie_mass)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out = Path(args.out) if args.out else _out_dir() / "bench.csv"
    _write(out, bench_csv(records))
    summary = bench_summary(records)
    sys.stdout.write(_dump({"csv": str(out), "families": summary}))
    bad = any(s["over_n5"] or s["not_optimal"] for s in summary.values())
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sdlearn", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a seeded instance file")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--family", choices=FAMILIES, default="uniform")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--weight-max", type=int, default=10)
    g.add_argument("--tie-mass", type=float, default=0.3)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="run the learner on an instance file")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--trace-out")
    s.add_argument("--report-out")
    s.add_argument("--transcript-out", help="also write the oracle query transcript (JSON lines)")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check the learner against exhaustive search")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--max-n", type=int, default=MAX_SEQUENCE_N)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="sweep n and families, write a CSV of query counts")
    b.add_argument("--n-from", type=int, default=3)
    b.add_argument("--n-to", type=int, default=6)
    b.add_argument("--families", default=",".join(FAMILIES))
    b.add_argument("--seeds", type=int, default=10, help="number of seeds per (n, family)")
    b.add_argument("--seed-base", type=int, default=0)
    b.add_argument("--weight-max", type=int, default=10)
    b.add_argument("--tie-mass", type=float, default=0.3)
    b.add_argument("--check", action="store_true", help="also verify optimality exhaustively (n <= 8)")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BudgetExceeded, InconsistentState) as exc:
        print(f"solver failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
