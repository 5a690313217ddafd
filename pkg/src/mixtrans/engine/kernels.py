"""Compiled search loops.

Lanes are addressed by their position in ``LaneIndex.lanes``; bases by
their metric row. All kernels evaluate the final test as
``num <= r * den`` with the same expression order so that results agree
bit for bit across algorithms.
"""

import numpy as np
from numba import njit

from ..model import metric_distance
from .heap import heap_push, heap_replace_max
from .lemmas import (lemma1_admissible, lemma2_admissible, lemma3_admissible,
                     lemma4_admissible)


@njit(cache=True, nogil=True)
def _new_hits():
    return [(np.int64(0), np.int64(0), 0.0) for _ in range(0)]


@njit(cache=True, nogil=True)
def _unpack(hits):
    n = len(hits)
    out2 = np.empty(n, np.int64)
    out3 = np.empty(n, np.int64)
    outr = np.empty(n, np.float64)
    for i in range(n):
        out2[i], out3[i], outr[i] = hits[i]
    return out2, out3, outr


@njit(cache=True, nogil=True)
def brute_force_kernel(t1, lane_start, lane_end, lane_dist, mode, coords, matrix, r):
    n = len(lane_dist)
    s1 = lane_start[t1]
    e1 = lane_end[t1]
    d1 = lane_dist[t1]
    # hits are appended to a list: rebinding growable arrays in the loop costs ~15x
    hits = _new_hits()
    for t2 in range(n):
        if t2 == t1:
            continue
        s2 = lane_start[t2]
        e2 = lane_end[t2]
        d2 = lane_dist[t2]
        x1 = metric_distance(mode, coords, matrix, s1, s2)
        z1 = metric_distance(mode, coords, matrix, e2, e1)
        for t3 in range(n):
            if t3 == t1 or t3 == t2:
                continue
            d3 = lane_dist[t3]
            x2 = metric_distance(mode, coords, matrix, s2, lane_start[t3])
            z2 = metric_distance(mode, coords, matrix, lane_end[t3], e2)
            num = x1 + x2 + d3 + z2 + z1
            den = d1 + d2 + d3
            if num <= r * den:
                hits.append((np.int64(t2), np.int64(t3), num / den))
    return _unpack(hits)


@njit(cache=True, nogil=True)
def pruned_kernel(t1, lane_start, lane_end, lane_dist, start_rows, bucket_ptr,
                  bucket_lanes, mode, coords, matrix, r):
    s1 = lane_start[t1]
    e1 = lane_end[t1]
    d1 = lane_dist[t1]
    n_s = len(start_rows)
    # d(t1.start, s) for every s in S: serves as x in the outer loop, x1 in the third
    from_t1 = np.empty(n_s, np.float64)
    for i in range(n_s):
        from_t1[i] = metric_distance(mode, coords, matrix, s1, start_rows[i])
    hits = _new_hits()
    for si in range(n_s):
        s = start_rows[si]
        x = from_t1[si]
        y = metric_distance(mode, coords, matrix, s, e1)
        if not lemma1_admissible(d1, x, y, r):
            continue
        for p in range(bucket_ptr[si], bucket_ptr[si + 1]):
            t3 = bucket_lanes[p]
            if t3 == t1:
                continue
            d3 = lane_dist[t3]
            e3 = lane_end[t3]
            z = metric_distance(mode, coords, matrix, e3, e1)
            if not lemma2_admissible(d1, x, d3, z, r):
                continue
            for sj in range(n_s):
                s2 = start_rows[sj]
                x1 = from_t1[sj]
                x2 = metric_distance(mode, coords, matrix, s2, s)
                if not lemma3_admissible(d1, d3, z, x1, x2, r):
                    continue
                for q in range(bucket_ptr[sj], bucket_ptr[sj + 1]):
                    t2 = bucket_lanes[q]
                    if t2 == t1 or t2 == t3:
                        continue
                    d2 = lane_dist[t2]
                    if not lemma4_admissible(d1, d3, z, x1, x2, d2, r):
                        continue
                    e2 = lane_end[t2]
                    z2 = metric_distance(mode, coords, matrix, e3, e2)
                    z1 = metric_distance(mode, coords, matrix, e2, e1)
                    num = x1 + x2 + d3 + z2 + z1
                    den = d1 + d2 + d3
                    if num <= r * den:
                        hits.append((np.int64(t2), np.int64(t3), num / den))
    return _unpack(hits)


@njit(cache=True, nogil=True)
def topk_kernel(t1, lane_start, lane_end, lane_dist, start_rows, bucket_ptr,
                bucket_lanes, mode, coords, matrix, r, k):
    """Pruned search that keeps the k best in a max-heap.

    Once k candidates are held, the working threshold drops to the worst
    rate kept and every later predicate uses it. Returns the heap arrays
    and the sequence of working thresholds (starting with ``r``).
    """
    s1 = lane_start[t1]
    e1 = lane_end[t1]
    d1 = lane_dist[t1]
    n_s = len(start_rows)
    from_t1 = np.empty(n_s, np.float64)
    for i in range(n_s):
        from_t1[i] = metric_distance(mode, coords, matrix, s1, start_rows[i])
    keys = np.empty(k, np.float64)
    h2 = np.empty(k, np.int64)
    h3 = np.empty(k, np.int64)
    size = 0
    trace = [r]
    rw = r
    for si in range(n_s):
        s = start_rows[si]
        x = from_t1[si]
        y = metric_distance(mode, coords, matrix, s, e1)
        if not lemma1_admissible(d1, x, y, rw):
            continue
        for p in range(bucket_ptr[si], bucket_ptr[si + 1]):
            t3 = bucket_lanes[p]
            if t3 == t1:
                continue
            d3 = lane_dist[t3]
            e3 = lane_end[t3]
            z = metric_distance(mode, coords, matrix, e3, e1)
            if not lemma2_admissible(d1, x, d3, z, rw):
                continue
            for sj in range(n_s):
                s2 = start_rows[sj]
                x1 = from_t1[sj]
                x2 = metric_distance(mode, coords, matrix, s2, s)
                if not lemma3_admissible(d1, d3, z, x1, x2, rw):
                    continue
                for q in range(bucket_ptr[sj], bucket_ptr[sj + 1]):
                    t2 = bucket_lanes[q]
                    if t2 == t1 or t2 == t3:
                        continue
                    d2 = lane_dist[t2]
                    if not lemma4_admissible(d1, d3, z, x1, x2, d2, rw):
                        continue
                    e2 = lane_end[t2]
                    z2 = metric_distance(mode, coords, matrix, e3, e2)
                    z1 = metric_distance(mode, coords, matrix, e2, e1)
                    num = x1 + x2 + d3 + z2 + z1
                    den = d1 + d2 + d3
                    if not num <= r * den:
                        continue
                    rate = num / den
                    if size < k:
                        size = heap_push(keys, h2, h3, size, rate, t2, t3)
                    elif rate <= keys[0]:
                        heap_replace_max(keys, h2, h3, size, rate, t2, t3)
                    else:
                        continue
                    if size == k:
                        rw = keys[0]
                        trace.append(rw)
    return h2[:size], h3[:size], keys[:size], np.array(trace)
