"""Command-line front end.

Exit codes: 0 success, 1 runtime or verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import bench as benchmod
from .engine import materialize, search
from .index import build_index
from .ingest import (generate_synthetic, load_dataset, read_bases, read_matrix,
                     validate_metric, write_dataset)
from .model import MATRIX, METRIC_MODES, MIN_RATE, MixTransError

log = logging.getLogger("mixtrans")

RESULT_HEADER = "t1,t2,t3,rate,x1,x2,d3,z2,z1"


class UsageError(Exception):
    pass


def _rate(text: str) -> float:
    try:
        r = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (MIN_RATE <= r < 1.0):
        raise argparse.ArgumentTypeError(f"r={text} outside the valid domain [1/3, 1)")
    return r


def _rate_list(text: str) -> list[float]:
    return [_rate(t) for t in text.split(",") if t.strip()]


def _positive(text: str) -> int:
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if k < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {k}")
    return k


def _non_negative(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {n}")
    return n


def _algorithms(text: str) -> list[str]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    bad = [n for n in names if n not in benchmod.ALGORITHMS]
    if bad or not names:
        raise argparse.ArgumentTypeError(
            f"unknown algorithm(s) {bad}; choose from {','.join(benchmod.ALGORITHMS)}")
    return names


def _dataset_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bases", required=True, type=Path, help="bases CSV")
    p.add_argument("--lanes", required=True, type=Path, help="lanes CSV")
    p.add_argument("--metric", choices=METRIC_MODES, default="euclidean")
    p.add_argument("--matrix", type=Path, help="distance matrix CSV (matrix metric only)")
    p.add_argument("--force", action="store_true",
                   help="accept a distance matrix that breaks the metric axioms")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixtrans", description="Enumerate low reduction-rate three-lane mixed transports.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a seeded synthetic planar dataset")
    g.add_argument("--bases", type=int, required=True)
    g.add_argument("--lanes", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--width", type=float, default=1200.0, help="region width in km")
    g.add_argument("--height", type=float, default=900.0, help="region height in km")
    g.add_argument("--out-dir", type=Path, required=True)

    v = sub.add_parser("validate", help="check a dataset and its metric")
    _dataset_args(v)
    v.add_argument("--sample-budget", type=int, default=10_000_000)

    for name, helptext in (("enumerate", "list every mixed transport with rate <= r"),
                           ("topk", "list the k best mixed transports with rate <= r")):
        e = sub.add_parser(name, help=helptext)
        _dataset_args(e)
        e.add_argument("--lane", required=True, help="id of the first lane t1")
        e.add_argument("--r", type=_rate, required=True, help="reduction-rate threshold in [1/3, 1)")
        e.add_argument("--out", type=Path, help="result CSV (default: stdout)")
        if name == "enumerate":
            e.add_argument("--algorithm", choices=benchmod.ALGORITHMS, default="pruned")
            e.add_argument("--k", type=_positive)
        else:
            e.add_argument("--k", type=_positive, required=True)

    b = sub.add_parser("bench", help="time the algorithms over sampled first lanes")
    _dataset_args(b)
    b.add_argument("--queries", type=_non_negative, default=100)
    b.add_argument("--r-values", type=_rate_list, default=list(benchmod.SWEEP_R_VALUES))
    b.add_argument("--algorithms", type=_algorithms, default=["brute", "pruned", "topk"])
    b.add_argument("--seed", type=int, default=0, help="seed for sampling the first lanes")
    b.add_argument("--k", type=_positive, default=10)
    b.add_argument("--jobs", type=_positive, default=1, help="worker threads")
    b.add_argument("--out", type=Path, help="timing report CSV")
    b.add_argument("--table", type=Path, help="also write the text table here")
    b.add_argument("--results", type=Path, help="per-query result digests CSV (deterministic)")
    return parser


def _load(args):
    ds = load_dataset(args.bases, args.lanes, args.metric, args.matrix, force=args.force)
    if args.metric == MATRIX and args.force and validate_metric(ds.metric.matrix):
        print("warning: distance matrix is not a metric; pruned results may be incomplete",
              file=sys.stderr)
    return ds


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text, encoding="utf-8")


def format_results(transports) -> str:
    lines = [RESULT_HEADER]
    for m in transports:
        lines.append(f"{m.t1.id},{m.t2.id},{m.t3.id},{m.rate:.6f},{m.x1:.6f},{m.x2:.6f},"
                     f"{m.d3:.6f},{m.z2:.6f},{m.z1:.6f}")
    return "\n".join(lines) + "\n"


def cmd_generate(args) -> int:
    if args.bases < 2:
        raise UsageError("--bases must be at least 2")
    if args.lanes < 1:
        raise UsageError("--lanes must be at least 1")
    if args.width <= 0 or args.height <= 0:
        raise UsageError("--width and --height must be positive")
    ds = generate_synthetic(args.bases, args.lanes, args.seed, args.width, args.height)
    paths = write_dataset(ds, args.out_dir)
    print(f"wrote {len(ds.bases)} bases to {paths['bases']} and {len(ds.lanes)} lanes to {paths['lanes']}")
    return 0


def cmd_validate(args) -> int:
    problems = []
    if args.metric == MATRIX:
        if args.matrix is None:
            raise UsageError("--metric matrix needs --matrix")
        bases = read_bases(args.bases, MATRIX)
        problems = validate_metric(read_matrix(args.matrix, len(bases)), args.sample_budget)
        for p in problems:
            print(f"{p.kind}: {p.detail}")
    ds = load_dataset(args.bases, args.lanes, args.metric, args.matrix, force=True)
    index = build_index(ds.lanes, ds.metric)
    print(f"{len(ds.bases)} bases, {len(ds.lanes)} lanes, {len(index.start_bases)} start bases, "
          f"metric {ds.mode}: {'FAILED' if problems else 'ok'}")
    return 1 if problems else 0


def cmd_enumerate(args) -> int:
    if args.algorithm == "topk" and args.k is None:
        raise UsageError("--algorithm topk needs --k")
    ds = _load(args)
    index = build_index(ds.lanes, ds.metric)
    if args.lane not in index.lane_by_id:
        raise UsageError(f"unknown lane {args.lane!r}")
    raw = search(index, args.lane, args.r, args.algorithm, args.k)
    _emit(format_results(materialize(index, raw)), args.out)
    return 0


def cmd_topk(args) -> int:
    args.algorithm = "topk"
    return cmd_enumerate(args)


def cmd_bench(args) -> int:
    if args.metric == MATRIX and args.force and "brute" not in args.algorithms:
        log.warning("non-metric matrix without brute force: nothing checks pruned results")
    ds = _load(args)
    index = build_index(ds.lanes, ds.metric)
    queries = benchmod.sample_queries(index, args.queries, args.seed)
    report = benchmod.run_bench(index, queries, args.r_values, args.algorithms,
                                args.k, args.jobs)
    table = benchmod.report_table(report)
    sys.stdout.write(table)
    if args.out:
        args.out.write_text(benchmod.report_csv(report), encoding="utf-8")
    if args.table:
        args.table.write_text(table, encoding="utf-8")
    if args.results:
        args.results.write_text(benchmod.results_csv(report, index), encoding="utf-8")
    if not report.ok:
        print(f"cross-check FAILED: {report.failures[0]}", file=sys.stderr)
        return 1
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "validate": cmd_validate,
    "enumerate": cmd_enumerate,
    "topk": cmd_topk,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"mixtrans {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, MixTransError) as exc:
        print(f"mixtrans {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
