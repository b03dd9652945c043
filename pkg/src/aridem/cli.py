"""Command-line front end.

Subcommands: demo (traced walkthrough programs), run (one model at one
configuration), sweep (the size/processor grid for both models), counts
(reference count tables and the derived ratio). Records go to stdout or
--out as CSV or JSON. Exit codes: 0 success, 1 failed run, 2 usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .baseline import (
    ELEMENT_COUNT_MODEL,
    INSTRUCTION_COUNT_MODEL,
    ratio_report,
    simulate_instruction_model,
)
from .core import ElementModelError
from .engine import run as run_program
from .machine import (
    CostModel,
    MachineConfig,
    Metrics,
    simulate,
    validate_metrics,
    worker_busy_profile,
)
from .programs import build_matmul_program, build_negate_demo, build_square_demo, matmul_element_count

RECORD_COLUMNS = ("model", "n", "procs", "seed", "elements_processed", "messages",
                  "sim_time", "idle_time_total", "imbalance", "result_checksum")
COUNT_COLUMNS = ("n", "instructions_reference", "elements_reference",
                 "elements_encoding", "instruction_element_ratio")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _int_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("expected a non-empty list of positive integers")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aridem",
        description="Simulate element-model programs and benchmark them "
                    "against an instruction-model baseline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    demo = sub.add_parser("demo", help="run a small traced walkthrough program")
    demo.add_argument("name", choices=("negate", "square"))
    demo.set_defaults(func=cmd_demo)

    def add_cost_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--t-proc", type=_non_negative_int, default=1,
                       help="time per dispatched work unit (default 1)")
        p.add_argument("--t-msg", type=_non_negative_int, default=10,
                       help="time per message (default 10)")
        p.add_argument("--t-master", type=_non_negative_int, default=0,
                       help="master bookkeeping time per dispatch (default 0)")
        p.add_argument("--dispatch", choices=("idle", "roundrobin"), default="idle",
                       help="worker pick policy (default idle)")

    def add_output_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    runp = sub.add_parser("run", help="simulate one model at one configuration")
    runp.add_argument("model", choices=("element", "instruction"))
    runp.add_argument("--n", type=_positive_int, required=True, help="matrix size")
    runp.add_argument("--procs", type=_positive_int, default=1, help="worker count")
    runp.add_argument("--seed", type=_non_negative_int, default=0)
    add_cost_flags(runp)
    add_output_flags(runp)
    runp.set_defaults(func=cmd_run)

    sweep = sub.add_parser("sweep", help="run the size/processor grid for both models")
    sweep.add_argument("--sizes", type=_int_list, default=[40, 60, 80, 100],
                       help="comma-separated matrix sizes (default 40,60,80,100)")
    sweep.add_argument("--procs", type=_int_list, default=[2, 4, 8, 16],
                       help="comma-separated worker counts (default 2,4,8,16)")
    sweep.add_argument("--seed", type=_non_negative_int, default=0)
    sweep.add_argument("--max-size", type=_positive_int, default=128,
                       help="largest size accepted (default 128)")
    add_cost_flags(sweep)
    add_output_flags(sweep)
    sweep.set_defaults(func=cmd_sweep)

    counts = sub.add_parser("counts", help="print reference count tables and ratios")
    counts.add_argument("--sizes", type=_int_list, default=[40, 60, 80, 100])
    add_output_flags(counts)
    counts.set_defaults(func=cmd_counts)

    return parser


def _costs(args: argparse.Namespace) -> CostModel:
    return CostModel(t_proc=args.t_proc, t_msg=args.t_msg, t_master=args.t_master)


def _record(model: str, n: int, procs: int, seed: int, metrics: Metrics) -> dict:
    validate_metrics(metrics)
    return {
        "model": model,
        "n": n,
        "procs": procs,
        "seed": seed,
        "elements_processed": metrics.elements_processed,
        "messages": metrics.messages,
        "sim_time": metrics.sim_time,
        "idle_time_total": metrics.idle_time_total,
        "imbalance": round(worker_busy_profile(metrics), 6),
        "result_checksum": metrics.result_checksum,
    }


def _simulate_one(model: str, n: int, procs: int, seed: int,
                  costs: CostModel, dispatch: str) -> Metrics:
    if model == "element":
        program = build_matmul_program(n, seed)
        machine = MachineConfig(workers=procs, rng_seed=seed, dispatch=dispatch)
        return simulate(program, machine, costs)
    return simulate_instruction_model(n, procs, costs, seed)


def _records_csv(records: list[dict], columns: tuple[str, ...],
                 float_fields: tuple[str, ...], comments: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for record in records:
        row = dict(record)
        for name in float_fields:
            row[name] = f"{record[name]:.6f}"
        writer.writerow(row)
    for line in comments:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as handle:
            handle.write(text)


def cmd_demo(args: argparse.Namespace) -> int:
    program = build_negate_demo() if args.name == "negate" else build_square_demo()
    names = program.names
    lines: list[str] = []

    def trace(kind: str, *payload) -> None:
        if kind == "pop":
            lines.append(f"pop {payload[0].describe(names)}")
        elif kind == "apply":
            lines.append(f"  apply {payload[0].operation.name.lower()}")
        elif kind == "create":
            lines.append(f"  -> {payload[0].describe(names)}")
        elif kind == "output":
            lines.append("  -> result recorded")

    result = run_program(program, trace=trace)
    result_name = program.identifier_name(program.result_identifier)
    for indices, value in sorted(result.outputs.items()):
        suffix = "(" + ",".join(map(str, indices)) + ")" if indices else ""
        lines.append(f"{result_name}{suffix} = {value}")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    metrics = _simulate_one(args.model, args.n, args.procs, args.seed,
                            _costs(args), args.dispatch)
    record = _record(args.model, args.n, args.procs, args.seed, metrics)
    if args.format == "json":
        text = json.dumps(record, indent=2) + "\n"
    else:
        text = _records_csv([record], RECORD_COLUMNS, ("imbalance",), [])
    _emit(text, args.out)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    sizes = sorted(set(args.sizes))
    procs = sorted(set(args.procs))
    if sizes[-1] > args.max_size:
        print(f"error: size {sizes[-1]} exceeds --max-size {args.max_size}",
              file=sys.stderr)
        return 2
    costs = _costs(args)

    records = []
    for model in ("element", "instruction"):
        for n in sizes:
            for p in procs:
                metrics = _simulate_one(model, n, p, args.seed, costs, args.dispatch)
                records.append(_record(model, n, p, args.seed, metrics))

    summary = []
    for model in ("element", "instruction"):
        for n in sizes:
            times = [r["sim_time"] for r in records
                     if r["model"] == model and r["n"] == n]
            decreasing = all(b < a for a, b in zip(times, times[1:]))
            summary.append({"model": model, "n": n, "sim_time_decreasing": decreasing})

    if args.format == "json":
        text = json.dumps({"records": records, "summary": summary}, indent=2) + "\n"
    else:
        comments = [
            f"model={s['model']} n={s['n']} "
            f"sim_time_decreasing={str(s['sim_time_decreasing']).lower()}"
            for s in summary
        ]
        text = _records_csv(records, RECORD_COLUMNS, ("imbalance",), comments)
    _emit(text, args.out)
    return 0


def cmd_counts(args: argparse.Namespace) -> int:
    rows = []
    for n in sorted(set(args.sizes)):
        rows.append({
            "n": n,
            "instructions_reference": INSTRUCTION_COUNT_MODEL.count(n),
            "elements_reference": ELEMENT_COUNT_MODEL.count(n),
            "elements_encoding": matmul_element_count(n),
            "instruction_element_ratio": round(float(ratio_report(n)), 6),
        })
    if args.format == "json":
        text = json.dumps({"rows": rows}, indent=2) + "\n"
    else:
        text = _records_csv(rows, COUNT_COLUMNS, ("instruction_element_ratio",), [])
    _emit(text, args.out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ElementModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
