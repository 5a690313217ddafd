"""Enumeration of low reduction-rate three-lane mixed transports."""

from .engine import (BoundedMaxHeap, brute_force_enumerate, pruned_enumerate,
                     search, topk_enumerate)
from .index import LaneIndex, build_index, lanes_from
from .model import (Base, Lane, MetricProvider, MixedTransport, Query, distance,
                    reduction_rate)

__version__ = "0.1.0"

__all__ = [
    "Base", "BoundedMaxHeap", "Lane", "LaneIndex", "MetricProvider",
    "MixedTransport", "Query", "brute_force_enumerate", "build_index",
    "distance", "lanes_from", "pruned_enumerate", "reduction_rate", "search",
    "topk_enumerate",
]
