import itertools
import math
from pathlib import Path

import pytest

from mixtrans import Base, Lane, MetricProvider, build_index

DATA = Path(__file__).parent / "data"

_acceptance_lines: list[str] = []


def record_acceptance(name: str, ok: bool, detail: str = "") -> None:
    _acceptance_lines.append(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))


def record_detail(line: str) -> None:
    _acceptance_lines.append("      " + line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


def slow_oracle(lanes, t1, r, dist):
    """All (t1, t2, t3) with rate <= r, straight from the definition.

    Plain Python over itertools.permutations, sharing nothing with the
    package except the distance function passed in.
    """
    out = {}
    for t2, t3 in itertools.permutations([t for t in lanes if t.id != t1.id], 2):
        loaded = (dist(t1.start, t2.start) + dist(t2.start, t3.start) + t3.dist
                  + dist(t3.end, t2.end) + dist(t2.end, t1.end))
        total = t1.dist + t2.dist + t3.dist
        if loaded <= r * total:
            out[(t1.id, t2.id, t3.id)] = loaded / total
    return out


def euclid(a, b):
    return math.hypot(a.location[0] - b.location[0], a.location[1] - b.location[1])


@pytest.fixture(scope="session")
def e1():
    """Three nested lanes on a line: L1 (0,0)->(10,0), L2 (1,0)->(9,0), L3 (2,0)->(8,0)."""
    pts = {"A": (0, 0), "B": (10, 0), "C": (1, 0), "D": (9, 0), "E": (2, 0), "F": (8, 0)}
    bases = {k: Base(k, (float(x), float(y))) for k, (x, y) in pts.items()}
    metric = MetricProvider.planar(list(bases.values()))
    lanes = [Lane.between("L1", bases["A"], bases["B"], metric),
             Lane.between("L2", bases["C"], bases["D"], metric),
             Lane.between("L3", bases["E"], bases["F"], metric)]
    return bases, metric, lanes, build_index(lanes, metric)


@pytest.fixture(scope="session")
def e1_files():
    return DATA / "e1" / "bases.csv", DATA / "e1" / "lanes.csv"
