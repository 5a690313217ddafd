"""Loading, writing, validating and generating lane datasets.

File formats (UTF-8 CSV with a header row):

* ``bases.csv``: ``base_id,x,y`` (planar km), ``base_id,lat,lon`` (degrees)
  or just ``base_id`` for matrix datasets.
* ``lanes.csv``: ``lane_id,origin_base_id,dest_base_id``. Any further
  columns are ignored; lane distances always come from the metric.
* ``matrix.csv``: |B| rows of |B| comma-separated distances, no header,
  rows and columns in bases-file order.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .model import (MATRIX, METRIC_MODES, PLANAR, SPHERICAL, Base, DuplicateIdError,
                    Lane, MetricProvider, MixTransError, UnknownBaseError)

log = logging.getLogger(__name__)

BASE_HEADERS = {
    PLANAR: ["base_id", "x", "y"],
    SPHERICAL: ["base_id", "lat", "lon"],
    MATRIX: ["base_id"],
}
LANE_HEADER = ["lane_id", "origin_base_id", "dest_base_id"]


class DataFormatError(MixTransError):
    pass


@dataclass(frozen=True)
class Dataset:
    bases: tuple[Base, ...]
    lanes: tuple[Lane, ...]
    metric: MetricProvider

    @property
    def mode(self) -> str:
        return self.metric.mode

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (self.bases == other.bases and self.lanes == other.lanes
                and self.metric.mode == other.metric.mode
                and np.array_equal(self.metric.matrix, other.metric.matrix))


def make_metric(mode: str, bases: Sequence[Base], matrix=None) -> MetricProvider:
    if mode == PLANAR:
        return MetricProvider.planar(bases)
    if mode == SPHERICAL:
        return MetricProvider.spherical(bases)
    if mode == MATRIX:
        if matrix is None:
            raise ValueError("matrix mode needs a distance matrix")
        return MetricProvider.from_matrix(bases, matrix)
    raise ValueError(f"unknown metric mode {mode!r}; expected one of {METRIC_MODES}")


def build_dataset(bases: Sequence[Base], lane_specs: Sequence[tuple[str, str, str]],
                  metric: MetricProvider) -> Dataset:
    """Resolve ``(lane_id, origin_id, dest_id)`` triples against ``bases``."""
    by_id: dict[str, Base] = {}
    for b in bases:
        if b.id in by_id:
            raise DuplicateIdError(f"duplicate base id {b.id!r}")
        by_id[b.id] = b
    lanes = []
    seen = set()
    for lane_id, o, d in lane_specs:
        if lane_id in seen:
            raise DuplicateIdError(f"duplicate lane id {lane_id!r}")
        seen.add(lane_id)
        for bid in (o, d):
            if bid not in by_id:
                raise UnknownBaseError(f"lane {lane_id!r} references unknown base {bid!r}")
        lanes.append(Lane.between(lane_id, by_id[o], by_id[d], metric))
    return Dataset(tuple(bases), tuple(lanes), metric)


def _rows(path: Path, expected: list[str], optional_extra: bool):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataFormatError(f"{path}:1: empty file, expected header {','.join(expected)}")
        header = [h.strip() for h in header]
        if header[:len(expected)] != expected or (len(header) > len(expected) and not optional_extra):
            raise DataFormatError(
                f"{path}:1: header {','.join(header)!r} does not match {','.join(expected)!r}")
        if len(header) > len(expected):
            log.warning("%s: ignoring extra columns %s; distances are recomputed from the metric",
                        path, header[len(expected):])
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) < len(expected):
                raise DataFormatError(
                    f"{path}:{reader.line_num}: expected {len(expected)} fields, got {len(row)}")
            yield reader.line_num, [c.strip() for c in row]


def read_bases(path: Path, mode: str) -> list[Base]:
    bases = []
    seen: set[str] = set()
    for lineno, row in _rows(path, BASE_HEADERS[mode], optional_extra=False):
        bid = row[0]
        if bid in seen:
            raise DuplicateIdError(f"{path}:{lineno}: duplicate base id {bid!r}")
        seen.add(bid)
        if mode == MATRIX:
            bases.append(Base(bid, len(bases)))
            continue
        try:
            loc = (float(row[1]), float(row[2]))
        except ValueError as exc:
            raise DataFormatError(f"{path}:{lineno}: bad coordinate ({exc})") from None
        if mode == SPHERICAL and not (-90 <= loc[0] <= 90 and -180 <= loc[1] <= 180):
            raise DataFormatError(f"{path}:{lineno}: latitude/longitude out of range for {bid!r}")
        bases.append(Base(bid, loc))
    return bases


def read_matrix(path: Path, n: int) -> np.ndarray:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            try:
                vals = [float(c) for c in row]
            except ValueError as exc:
                raise DataFormatError(f"{path}:{lineno}: bad distance ({exc})") from None
            if len(vals) != n:
                raise DataFormatError(f"{path}:{lineno}: expected {n} columns, got {len(vals)}")
            rows.append(vals)
    if len(rows) != n:
        raise DataFormatError(f"{path}: expected {n} rows, got {len(rows)}")
    return np.array(rows, dtype=np.float64).reshape(n, n)


def load_dataset(bases_file, lanes_file, metric_mode: str = PLANAR,
                 matrix_file=None, force: bool = False) -> Dataset:
    """Read a dataset from CSV files.

    For matrix datasets the matrix is checked with :func:`validate_metric`;
    a matrix that breaks the metric axioms is refused unless ``force`` is
    set, because pruned searches may then miss results.
    """
    if metric_mode not in METRIC_MODES:
        raise ValueError(f"unknown metric mode {metric_mode!r}")
    bases_file, lanes_file = Path(bases_file), Path(lanes_file)
    bases = read_bases(bases_file, metric_mode)
    matrix = None
    if metric_mode == MATRIX:
        if matrix_file is None:
            raise ValueError("matrix mode needs a matrix file")
        matrix = read_matrix(Path(matrix_file), len(bases))
        problems = validate_metric(matrix)
        if problems:
            msg = f"{matrix_file}: not a metric ({len(problems)} violations, first: {problems[0]})"
            if not force:
                raise MixTransError(msg)
            log.warning("%s; pruned results may be incomplete", msg)
            matrix = _symmetrized(matrix)
    metric = make_metric(metric_mode, bases, matrix)

    by_id = {b.id: b for b in bases}
    lanes = []
    seen: set[str] = set()
    for lineno, row in _rows(lanes_file, LANE_HEADER, optional_extra=True):
        lane_id, o, d = row[:3]
        if lane_id in seen:
            raise DuplicateIdError(f"{lanes_file}:{lineno}: duplicate lane id {lane_id!r}")
        seen.add(lane_id)
        for bid in (o, d):
            if bid not in by_id:
                raise UnknownBaseError(f"{lanes_file}:{lineno}: unknown base {bid!r}")
        try:
            lanes.append(Lane.between(lane_id, by_id[o], by_id[d], metric))
        except MixTransError as exc:
            raise type(exc)(f"{lanes_file}:{lineno}: {exc}") from None
    return Dataset(tuple(bases), tuple(lanes), metric)


def _symmetrized(matrix: np.ndarray) -> np.ndarray:
    # a forced matrix still has to satisfy what MetricProvider enforces
    m = np.maximum(matrix, 0.0)
    m = np.minimum(m, m.T)
    np.fill_diagonal(m, 0.0)
    return m


def _fmt(v: float) -> str:
    return repr(float(v))


def write_dataset(dataset: Dataset, out_dir) -> dict[str, Path]:
    """Write ``bases.csv``, ``lanes.csv`` (and ``matrix.csv``) into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    mode = dataset.mode
    paths = {"bases": out / "bases.csv", "lanes": out / "lanes.csv"}
    with open(paths["bases"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(BASE_HEADERS[mode])
        for b in dataset.bases:
            w.writerow([b.id] if mode == MATRIX else [b.id, _fmt(b.location[0]), _fmt(b.location[1])])
    with open(paths["lanes"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(LANE_HEADER)
        for t in dataset.lanes:
            w.writerow([t.id, t.start.id, t.end.id])
    if mode == MATRIX:
        paths["matrix"] = out / "matrix.csv"
        with open(paths["matrix"], "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            for row in dataset.metric.matrix:
                w.writerow([_fmt(v) for v in row])
    return paths


def generate_synthetic(n_bases: int, n_lanes: int, seed: int,
                       width: float = 1200.0, height: float = 900.0) -> Dataset:
    """Planar instance with bases uniform over a width x height km box.

    Each lane joins two distinct bases drawn uniformly. Coordinates are
    rounded to metres so the CSV form reloads to the same dataset.
    """
    if n_bases < 2:
        raise ValueError("need at least 2 bases")
    if n_lanes < 0:
        raise ValueError("n_lanes must be non-negative")
    rng = np.random.default_rng(seed)
    xs = np.round(rng.uniform(0.0, width, n_bases), 3)
    ys = np.round(rng.uniform(0.0, height, n_bases), 3)
    bw = len(str(n_bases - 1))
    bases = [Base(f"B{i:0{bw}d}", (float(x), float(y))) for i, (x, y) in enumerate(zip(xs, ys))]
    metric = MetricProvider.planar(bases)

    starts = rng.integers(0, n_bases, n_lanes)
    ends = rng.integers(0, n_bases - 1, n_lanes)
    ends += ends >= starts
    # coincident coordinates would give a zero-length lane; redraw those
    while True:
        bad = np.flatnonzero((xs[starts] == xs[ends]) & (ys[starts] == ys[ends]))
        if not len(bad):
            break
        if np.unique(np.c_[xs, ys], axis=0).shape[0] < 2:
            raise ValueError("all bases coincide; cannot place a lane")
        starts[bad] = rng.integers(0, n_bases, len(bad))
        e = rng.integers(0, n_bases - 1, len(bad))
        ends[bad] = e + (e >= starts[bad])

    lw = len(str(max(n_lanes - 1, 0)))
    lanes = tuple(Lane.between(f"L{j:0{lw}d}", bases[s], bases[e], metric)
                  for j, (s, e) in enumerate(zip(starts.tolist(), ends.tolist())))
    return Dataset(tuple(bases), lanes, metric)


class Violation(NamedTuple):
    kind: str  # "negative", "diagonal", "symmetry" or "triangle"
    indices: tuple[int, ...]
    detail: str


def validate_metric(matrix, sample_budget: int = 10_000_000, rtol: float = 1e-9,
                    seed: int = 0, limit: int = 1000) -> list[Violation]:
    """Check a distance matrix against the metric axioms.

    The triangle inequality d(a,c) <= d(a,b) + d(b,c) is checked for every
    triple when n**3 <= sample_budget and on ``sample_budget`` random
    triples otherwise. Differences below ``rtol`` times the largest entry
    are treated as rounding. At most ``limit`` violations are returned.
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {m.shape}")
    n = m.shape[0]
    tol = rtol * (float(np.abs(m).max()) if m.size else 0.0)
    found: list[Violation] = []

    def add(kind, idx, detail):
        if len(found) < limit:
            found.append(Violation(kind, tuple(int(i) for i in idx), detail))

    for a, b in np.argwhere(m < 0):
        add("negative", (a, b), f"d({a},{b}) = {m[a, b]!r} < 0")
    for a in np.flatnonzero(np.diag(m) != 0):
        add("diagonal", (a,), f"d({a},{a}) = {m[a, a]!r} != 0")
    for a, b in np.argwhere(np.triu(np.abs(m - m.T) > tol, 1)):
        add("symmetry", (a, b), f"d({a},{b}) = {m[a, b]!r} but d({b},{a}) = {m[b, a]!r}")

    if n ** 3 <= sample_budget:
        for b in range(n):
            via = m[:, b, None] + m[None, b, :]
            for a, c in np.argwhere(m > via + tol):
                add("triangle", (a, b, c),
                    f"d({a},{c}) = {m[a, c]!r} > d({a},{b}) + d({b},{c}) = {via[a, c]!r}")
            if len(found) >= limit:
                break
    elif n:
        rng = np.random.default_rng(seed)
        left = sample_budget
        while left > 0 and len(found) < limit:
            a, b, c = rng.integers(0, n, (3, min(left, 1 << 20)))
            left -= len(a)
            for i in np.flatnonzero(m[a, c] > m[a, b] + m[b, c] + tol):
                add("triangle", (a[i], b[i], c[i]),
                    f"d({a[i]},{c[i]}) = {m[a[i], c[i]]!r} > "
                    f"d({a[i]},{b[i]}) + d({b[i]},{c[i]}) = {m[a[i], b[i]] + m[b[i], c[i]]!r}")
    return found
