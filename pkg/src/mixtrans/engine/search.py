"""Python entry points for the three enumeration algorithms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..index import LaneIndex
from ..model import Lane, MixedTransport, check_k, check_rate
from .kernels import brute_force_kernel, pruned_kernel, topk_kernel

ALGORITHMS = ("brute", "pruned", "topk")


@dataclass(frozen=True)
class RawResult:
    """Search output as lane positions into ``index.lanes``.

    Rows are sorted by rate, then by t2 id, then by t3 id. ``trace`` holds
    the working thresholds of a top-k run and is None otherwise.
    """

    t1: int
    t2: np.ndarray
    t3: np.ndarray
    rate: np.ndarray
    trace: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.rate)

    def triples(self) -> set[tuple[int, int, int]]:
        return {(self.t1, a, b) for a, b in zip(self.t2.tolist(), self.t3.tolist())}


def _position(index: LaneIndex, t1: Lane | str) -> int:
    pos = index.position(t1)
    if isinstance(t1, Lane) and index.lanes[pos] != t1:
        raise KeyError(f"lane {t1.id!r} differs from the indexed lane with that id")
    return pos


def _sorted(t1, t2, t3, rate, trace=None) -> RawResult:
    order = np.lexsort((t3, t2, rate))
    return RawResult(t1, t2[order], t3[order], rate[order], trace)


def search(index: LaneIndex, t1: Lane | str, r: float, algorithm: str = "pruned",
           k: int | None = None) -> RawResult:
    """Run one query and return the raw, sorted result.

    ``algorithm`` is ``brute``, ``pruned`` or ``topk``; ``k`` is required
    for ``topk`` and ignored otherwise.
    """
    check_rate(r)
    pos = _position(index, t1)
    m = index.metric
    if algorithm == "brute":
        out = brute_force_kernel(pos, index.lane_start, index.lane_end, index.lane_dist,
                                 m.code, m.coords, m.matrix, r)
        return _sorted(pos, *out)
    if algorithm == "pruned":
        out = pruned_kernel(pos, index.lane_start, index.lane_end, index.lane_dist,
                            index.start_rows, index.bucket_ptr, index.bucket_lanes,
                            m.code, m.coords, m.matrix, r)
        return _sorted(pos, *out)
    if algorithm == "topk":
        if k is None:
            raise ValueError("top-k search needs k")
        check_k(k)
        t2, t3, rate, trace = topk_kernel(pos, index.lane_start, index.lane_end, index.lane_dist,
                                          index.start_rows, index.bucket_ptr, index.bucket_lanes,
                                          m.code, m.coords, m.matrix, r, int(k))
        return _sorted(pos, t2, t3, rate, trace)
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


def materialize(index: LaneIndex, raw: RawResult) -> list[MixedTransport]:
    m = index.metric
    lanes = index.lanes
    t1 = lanes[raw.t1]
    out = []
    for a, b, rate in zip(raw.t2.tolist(), raw.t3.tolist(), raw.rate.tolist()):
        t2, t3 = lanes[a], lanes[b]
        out.append(MixedTransport(
            t1, t2, t3,
            x1=m.distance(t1.start, t2.start),
            x2=m.distance(t2.start, t3.start),
            z1=m.distance(t2.end, t1.end),
            z2=m.distance(t3.end, t2.end),
            rate=rate,
        ))
    return out


def brute_force_enumerate(index: LaneIndex, t1: Lane | str, r: float) -> list[MixedTransport]:
    """Every (t1, t2, t3) with rate <= r, by checking all ordered partner pairs."""
    return materialize(index, search(index, t1, r, "brute"))


def pruned_enumerate(index: LaneIndex, t1: Lane | str, r: float) -> list[MixedTransport]:
    """Same set as :func:`brute_force_enumerate`, skipping hopeless candidates early."""
    return materialize(index, search(index, t1, r, "pruned"))


def topk_enumerate(index: LaneIndex, t1: Lane | str, r: float, k: int) -> list[MixedTransport]:
    """The k lowest-rate mixed transports with rate <= r, best first.

    Ties at the k-th rate are broken by scan order, so only the list of
    rates is guaranteed to match the full enumeration.
    """
    return materialize(index, search(index, t1, r, "topk", k))
