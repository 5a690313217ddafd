"""Lanes grouped by start base, plus the flat arrays the search kernels read."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .model import Base, DuplicateIdError, Lane, MetricProvider, UnknownBaseError


@dataclass(frozen=True, eq=False)
class LaneIndex:
    """Immutable query structure over a lane set.

    ``lanes_by_start`` maps a base id to T(b), the lanes leaving it, and
    ``start_bases`` is S, the bases with at least one outgoing lane. Both are
    ordered by id so every scan is reproducible.

    The array attributes mirror the same data for the compiled kernels:
    lane ``i`` is ``lanes[i]``; ``start_rows`` holds the metric row of each
    base in S and ``bucket_ptr``/``bucket_lanes`` store T(b) in CSR form
    aligned with ``start_rows``.
    """

    metric: MetricProvider
    lanes: tuple[Lane, ...]
    lane_by_id: Mapping[str, Lane]
    lanes_by_start: Mapping[str, tuple[Lane, ...]]
    start_bases: tuple[Base, ...]
    lane_pos: Mapping[str, int]
    lane_start: np.ndarray
    lane_end: np.ndarray
    lane_dist: np.ndarray
    start_rows: np.ndarray
    bucket_ptr: np.ndarray
    bucket_lanes: np.ndarray

    def __len__(self) -> int:
        return len(self.lanes)

    def lanes_from(self, base: Base | str) -> tuple[Lane, ...]:
        bid = base.id if isinstance(base, Base) else base
        return self.lanes_by_start.get(bid, ())

    def position(self, lane: Lane | str) -> int:
        lid = lane.id if isinstance(lane, Lane) else lane
        try:
            return self.lane_pos[lid]
        except KeyError:
            raise KeyError(f"lane {lid!r} is not in the index") from None


def build_index(lanes: Sequence[Lane], metric: MetricProvider) -> LaneIndex:
    ordered = sorted(lanes, key=lambda t: t.id)
    for prev, cur in zip(ordered, ordered[1:]):
        if prev.id == cur.id:
            raise DuplicateIdError(f"duplicate lane id {cur.id!r}")
    for t in ordered:
        for b in (t.start, t.end):
            if b not in metric:
                raise UnknownBaseError(f"lane {t.id!r} references unknown base {b.id!r}")

    buckets: dict[str, list[Lane]] = {}
    base_of: dict[str, Base] = {}
    for t in ordered:
        buckets.setdefault(t.start.id, []).append(t)
        base_of[t.start.id] = t.start
    start_ids = sorted(buckets)
    lanes_by_start = {bid: tuple(buckets[bid]) for bid in start_ids}
    lane_pos = {t.id: i for i, t in enumerate(ordered)}

    ptr = np.zeros(len(start_ids) + 1, dtype=np.int64)
    flat = []
    for j, bid in enumerate(start_ids):
        flat.extend(lane_pos[t.id] for t in lanes_by_start[bid])
        ptr[j + 1] = len(flat)

    def frozen(a):
        a.setflags(write=False)
        return a

    return LaneIndex(
        metric=metric,
        lanes=tuple(ordered),
        lane_by_id={t.id: t for t in ordered},
        lanes_by_start=lanes_by_start,
        start_bases=tuple(base_of[bid] for bid in start_ids),
        lane_pos=lane_pos,
        lane_start=frozen(np.array([metric.row(t.start) for t in ordered], dtype=np.int64)),
        lane_end=frozen(np.array([metric.row(t.end) for t in ordered], dtype=np.int64)),
        lane_dist=frozen(np.array([t.dist for t in ordered], dtype=np.float64)),
        start_rows=frozen(np.array([metric.row(bid) for bid in start_ids], dtype=np.int64)),
        bucket_ptr=frozen(ptr),
        bucket_lanes=frozen(np.array(flat, dtype=np.int64)),
    )


def lanes_from(index: LaneIndex, b: Base | str) -> tuple[Lane, ...]:
    """T(b): lanes starting at ``b``; empty for end-only or unknown bases."""
    return index.lanes_from(b)
