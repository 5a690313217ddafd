"""Timing and cross-checking the algorithms over a batch of matching requests."""

from __future__ import annotations

import csv
import hashlib
import io
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .engine import ALGORITHMS, RawResult, search
from .index import LaneIndex

SWEEP_R_VALUES = (0.35, 0.40, 0.45, 0.50, 0.55, 0.60)

PASS, FAILED, UNCHECKED = "PASS", "FAILED", "-"


@dataclass
class Cell:
    algorithm: str
    r: float
    seconds: float
    query_seconds: list[float]
    results: list[RawResult]
    check: str = UNCHECKED

    @property
    def result_count(self) -> int:
        return sum(len(res) for res in self.results)


@dataclass
class BenchReport:
    queries: list[int]
    k: int | None
    jobs: int
    cells: list[Cell] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def cell(self, algorithm: str, r: float) -> Cell | None:
        for c in self.cells:
            if c.algorithm == algorithm and c.r == r:
                return c
        return None

    def speedup(self, c: Cell) -> float | None:
        ref = self.cell("brute", c.r)
        if ref is None or c.seconds <= 0:
            return None
        return ref.seconds / c.seconds


def sample_queries(index: LaneIndex, n: int, seed: int) -> list[int]:
    """Lane positions to use as first lanes; fixed by ``seed``."""
    if n <= 0 or not len(index):
        return []
    rng = np.random.default_rng(seed)
    return sorted(rng.choice(len(index), size=n, replace=n > len(index)).tolist())


def _warm_up(index: LaneIndex, algorithms, k) -> None:
    # first calls may load or compile the kernels; keep that out of the timings
    for alg in algorithms:
        search(index, index.lanes[0], 0.35, alg, k)


def _run_cell(index, queries, alg, r, k, jobs) -> Cell:
    def one(pos):
        t0 = time.perf_counter()
        res = search(index, index.lanes[pos], r, alg, k)
        return res, time.perf_counter() - t0

    t0 = time.perf_counter()
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            out = list(pool.map(one, queries))
    else:
        out = [one(pos) for pos in queries]
    wall = time.perf_counter() - t0
    return Cell(alg, r, wall, [s for _, s in out], [res for res, _ in out])


def _cross_check(report: BenchReport, index: LaneIndex, r: float) -> None:
    brute, pruned, topk = (report.cell(a, r) for a in ALGORITHMS)
    full = brute or pruned
    if brute and pruned:
        pruned.check = brute.check = PASS
        for q, a, b in zip(report.queries, brute.results, pruned.results):
            if a.triples() != b.triples():
                pruned.check = brute.check = FAILED
                report.failures.append(
                    f"r={r:.2f} t1={index.lanes[q].id}: brute found {len(a)}, pruned found {len(b)}")
                break
    if topk and full:
        topk.check = PASS
        for q, a, b in zip(report.queries, full.results, topk.results):
            if not np.array_equal(a.rate[:report.k], b.rate):
                topk.check = FAILED
                report.failures.append(
                    f"r={r:.2f} t1={index.lanes[q].id}: top-{report.k} rates differ from "
                    f"{full.algorithm}")
                break


def run_bench(index: LaneIndex, queries: list[int], r_values, algorithms,
              k: int | None = 10, jobs: int = 1) -> BenchReport:
    algorithms = [a for a in ALGORITHMS if a in set(algorithms)]
    if "topk" in algorithms and not k:
        raise ValueError("top-k benchmark needs k")
    report = BenchReport(list(queries), k if "topk" in algorithms else None, jobs)
    if queries:
        _warm_up(index, algorithms, k)
    for r in r_values:
        for alg in algorithms:
            report.cells.append(_run_cell(index, queries, alg, r, k, jobs))
        _cross_check(report, index, r)
    return report


REPORT_HEADER = ["algorithm", "r", "queries", "seconds", "query_seconds_sum",
                 "query_seconds_median", "query_seconds_max", "results",
                 "speedup_vs_brute", "check"]


def report_csv(report: BenchReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_HEADER)
    for c in report.cells:
        qs = np.array(c.query_seconds)
        sp = report.speedup(c)
        w.writerow([c.algorithm, f"{c.r:.2f}", len(c.results), f"{c.seconds:.6f}",
                    f"{qs.sum():.6f}" if len(qs) else "0",
                    f"{np.median(qs):.6f}" if len(qs) else "",
                    f"{qs.max():.6f}" if len(qs) else "",
                    c.result_count, f"{sp:.1f}" if sp is not None else "", c.check])
    return buf.getvalue()


def report_table(report: BenchReport) -> str:
    """Seconds per batch, one row per r (largest first) and one column per algorithm."""
    algs = [a for a in ALGORITHMS if any(c.algorithm == a for c in report.cells)]
    rs = sorted({c.r for c in report.cells}, reverse=True)
    names = {"brute": "Brute-force", "pruned": "Pruning",
             "topk": f"{report.k} best" if report.k else "k best"}
    head = ["Scenario"] + [names[a] for a in algs]
    rows = []
    for r in rs:
        row = [f"r = {r:.2f}"]
        for a in algs:
            c = report.cell(a, r)
            text = f"{c.seconds:.3f}" if c else ""
            if c and c.check == FAILED:
                text += " FAILED"
            row.append(text)
        rows.append(row)
    widths = [max(len(x) for x in col) for col in zip(head, *rows)] if rows else [len(h) for h in head]
    sep = "+" + "+".join("-" * (w + 2) for w in widths) + "+"
    lines = [f"Computational time to process {len(report.queries)} matching requests (seconds)",
             sep, "| " + " | ".join(h.ljust(w) for h, w in zip(head, widths)) + " |", sep]
    for row in rows:
        lines.append("| " + " | ".join([row[0].ljust(widths[0])] +
                                       [x.rjust(w) for x, w in zip(row[1:], widths[1:])]) + " |")
    lines.append(sep)
    for r in rs:
        for a in algs:
            c = report.cell(a, r)
            sp = report.speedup(c)
            if a != "brute" and sp is not None:
                lines.append(f"r = {r:.2f}: {names[a]} is {sp:.1f}x faster than brute force")
    return "\n".join(lines) + "\n"


def _digest(index: LaneIndex, res: RawResult) -> str:
    h = hashlib.sha256()
    for a, b, rate in zip(res.t2.tolist(), res.t3.tolist(), res.rate.tolist()):
        h.update(f"{index.lanes[a].id},{index.lanes[b].id},{rate!r}\n".encode())
    return h.hexdigest()[:16]


def results_csv(report: BenchReport, index: LaneIndex) -> str:
    """Per-query result counts and digests; free of timings, so reruns match byte for byte."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["algorithm", "r", "t1", "results", "best_rate", "digest"])
    for c in report.cells:
        for q, res in zip(report.queries, c.results):
            best = f"{res.rate[0]:.6f}" if len(res) else ""
            w.writerow([c.algorithm, f"{c.r:.2f}", index.lanes[q].id, len(res), best,
                        _digest(index, res)])
    return buf.getvalue()
