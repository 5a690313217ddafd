"""Array-backed binary max-heap with a fixed capacity.

The free functions operate on plain arrays so the search kernels can use
them directly; :class:`BoundedMaxHeap` wraps the same functions for Python
callers. Each entry is a float key plus two integer payloads.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def heap_push(keys, pa, pb, size, key, a, b):
    """Insert into a heap holding ``size`` entries; returns the new size."""
    i = size
    while i > 0:
        parent = (i - 1) >> 1
        if keys[parent] >= key:
            break
        keys[i] = keys[parent]
        pa[i] = pa[parent]
        pb[i] = pb[parent]
        i = parent
    keys[i] = key
    pa[i] = a
    pb[i] = b
    return size + 1


@njit(cache=True, nogil=True)
def heap_replace_max(keys, pa, pb, size, key, a, b):
    """Drop the root (the maximum) and insert ``key`` in one sift-down pass."""
    i = 0
    while True:
        child = 2 * i + 1
        if child >= size:
            break
        if child + 1 < size and keys[child + 1] > keys[child]:
            child += 1
        if keys[child] <= key:
            break
        keys[i] = keys[child]
        pa[i] = pa[child]
        pb[i] = pb[child]
        i = child
    keys[i] = key
    pa[i] = a
    pb[i] = b


class BoundedMaxHeap:
    """Keeps the ``capacity`` smallest keys offered so far; the root is the worst kept."""

    def __init__(self, capacity: int) -> None:
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = int(capacity)
        self.keys = np.empty(self.capacity, dtype=np.float64)
        self.pa = np.empty(self.capacity, dtype=np.int64)
        self.pb = np.empty(self.capacity, dtype=np.int64)
        self.size = 0

    def __len__(self) -> int:
        return self.size

    @property
    def full(self) -> bool:
        return self.size == self.capacity

    def peek_max(self) -> float:
        if not self.size:
            raise IndexError("peek on empty heap")
        return float(self.keys[0])

    def offer(self, key: float, a: int = -1, b: int = -1) -> bool:
        """Add an entry, evicting the current maximum when full.

        A key equal to the current maximum still displaces it. Returns False
        when the heap is full and ``key`` is larger than everything held.
        """
        if self.size < self.capacity:
            self.size = heap_push(self.keys, self.pa, self.pb, self.size, key, a, b)
            return True
        if key <= self.keys[0]:
            heap_replace_max(self.keys, self.pa, self.pb, self.size, key, a, b)
            return True
        return False

    def sorted_items(self) -> list[tuple[float, int, int]]:
        n = self.size
        return sorted(zip(self.keys[:n].tolist(), self.pa[:n].tolist(), self.pb[:n].tolist()))
