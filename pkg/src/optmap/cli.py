"""Command-line interface.

Subcommands:

* ``bench``    — generate a benchmark family and report build timing.
* ``counts``   — print a family's closed-form entity counts.
* ``mapbench`` — time an identical add/query/delete workload on each
  available index-map implementation (pure and, when built, compiled).

Exit status is 0 on success and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time
from dataclasses import asdict

from optmap.backends.lp_writer import LpWriterBackend
from optmap.backends.reference import ReferenceBackend
from optmap.bench import FAMILY_NAMES, expected_counts, run_benchmark
from optmap.indexmap import implementations

_BENCH_COLUMNS = (
    "family",
    "n",
    "backend",
    "variables",
    "linear_rows",
    "quadratic_rows",
    "sos_rows",
    "build_seconds",
    "reps",
)
_COUNT_COLUMNS = (
    "family",
    "n",
    "variables",
    "linear_rows",
    "quadratic_rows",
    "sos_rows",
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="optmap",
        description="Benchmark generators and index-map utilities.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    bench = commands.add_parser("bench", help="generate a family and time the build")
    bench.add_argument("family", choices=FAMILY_NAMES)
    bench.add_argument("--n", type=int, required=True, help="instance size")
    bench.add_argument(
        "--backend",
        choices=("reference", "lp"),
        default="reference",
        help="in-memory backend or LP-file writer",
    )
    bench.add_argument(
        "--out",
        default="model.lp",
        help="LP output path (lp backend only)",
    )
    bench.add_argument("--reps", type=int, default=1, help="repetitions; best is kept")
    bench.add_argument("--format", choices=("csv", "json"), default="csv")
    bench.set_defaults(handler=_cmd_bench)

    counts = commands.add_parser("counts", help="print closed-form entity counts")
    counts.add_argument("family", choices=FAMILY_NAMES)
    counts.add_argument("--n", type=int, required=True, help="instance size")
    counts.set_defaults(handler=_cmd_counts)

    mapbench = commands.add_parser(
        "mapbench", help="compare index-map implementations on one workload"
    )
    mapbench.add_argument(
        "--ops", type=int, default=200_000, help="operations per implementation"
    )
    mapbench.add_argument("--seed", type=int, default=0, help="workload RNG seed")
    mapbench.set_defaults(handler=_cmd_mapbench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ValueError as error:
        parser.error(str(error))  # exits with status 2


def _cmd_bench(args) -> int:
    if args.backend == "lp":
        factory = lambda: LpWriterBackend(args.out)  # noqa: E731
    else:
        factory = ReferenceBackend
    report = run_benchmark(
        args.family, args.n, factory, reps=args.reps, backend_label=args.backend
    )
    record = asdict(report)
    if args.format == "json":
        print(json.dumps(record))
    else:
        writer = csv.DictWriter(sys.stdout, fieldnames=_BENCH_COLUMNS)
        writer.writeheader()
        writer.writerow(record)
    return 0


def _cmd_counts(args) -> int:
    counts = expected_counts(args.family, args.n)
    writer = csv.DictWriter(sys.stdout, fieldnames=_COUNT_COLUMNS)
    writer.writeheader()
    writer.writerow(
        {
            "family": args.family,
            "n": args.n,
            "variables": counts.variables,
            "linear_rows": counts.linear_rows,
            "quadratic_rows": counts.quadratic_rows,
            "sos_rows": counts.sos_rows,
        }
    )
    return 0


def _cmd_mapbench(args) -> int:
    if args.ops < 1:
        raise ValueError(f"--ops must be >= 1, got {args.ops}")
    workload = _mapbench_workload(args.ops, args.seed)
    writer = csv.writer(sys.stdout)
    writer.writerow(("implementation", "ops", "seconds", "ops_per_second"))
    for name, module in implementations().items():
        seconds = _time_workload(module.BipurMap, workload)
        rate = args.ops / seconds if seconds > 0 else float("inf")
        writer.writerow((name, args.ops, f"{seconds:.6f}", f"{rate:.0f}"))
    return 0


def _mapbench_workload(ops: int, seed: int) -> list[tuple[int, float]]:
    """Mixed workload as (code, draw) pairs: 0 add, 1 query, 2 delete.

    The draw picks the target location at run time, scaled by how many
    locations exist then, so every implementation replays byte-identical
    decisions.
    """
    rng = random.Random(seed)
    return [
        (0 if (roll := rng.random()) < 0.60 else 1 if roll < 0.85 else 2, rng.random())
        for _ in range(ops)
    ]


def _time_workload(map_type, workload) -> float:
    instance = map_type()
    issued = 0
    start = time.perf_counter()
    for code, draw in workload:
        if code == 0 or issued == 0:
            instance.add_entity()
            issued += 1
        elif code == 1:
            instance.calculate_index(int(draw * issued))
        else:
            instance.delete_entity(int(draw * issued))
    return time.perf_counter() - start


if __name__ == "__main__":
    sys.exit(main())
