"""Domain types, metric providers and the reduction rate.

Distances are kilometres throughout. A mixed transport ``(t1, t2, t3)`` is
driven ``t1.start -> t2.start -> t3.start -> t3.end -> t2.end -> t1.end``;
loads go on in that order and come off in reverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from numba import njit

EARTH_RADIUS_KM = 6371.0088
MIN_RATE = 1.0 / 3.0

PLANAR = "euclidean"
SPHERICAL = "haversine"
MATRIX = "matrix"
METRIC_MODES = (PLANAR, SPHERICAL, MATRIX)

# integer codes understood by the compiled kernels
MODE_CODES = {PLANAR: 0, SPHERICAL: 1, MATRIX: 2}


class MixTransError(ValueError):
    """Base class for data errors raised by this package."""


class UnknownBaseError(MixTransError, LookupError):
    pass


class DuplicateIdError(MixTransError):
    pass


class ZeroLengthLaneError(MixTransError):
    pass


@njit(cache=True, nogil=True, inline="always")
def planar_km(x1, y1, x2, y2):
    dx = x1 - x2
    dy = y1 - y2
    return math.sqrt(dx * dx + dy * dy)


@njit(cache=True, nogil=True, inline="always")
def haversine_km(lat1, lon1, lat2, lon2):
    phi1 = math.radians(lat1)
    phi2 = math.radians(lat2)
    sin_dphi = math.sin((phi2 - phi1) * 0.5)
    sin_dlam = math.sin(math.radians(lon2 - lon1) * 0.5)
    h = sin_dphi * sin_dphi + math.cos(phi1) * math.cos(phi2) * (sin_dlam * sin_dlam)
    if h > 1.0:
        h = 1.0
    return 2.0 * EARTH_RADIUS_KM * math.asin(math.sqrt(h))


@njit(cache=True, nogil=True, inline="always")
def metric_distance(mode, coords, matrix, a, b):
    """Distance between base rows ``a`` and ``b``; ``mode`` is a MODE_CODES value."""
    if mode == 0:
        return planar_km(coords[a, 0], coords[a, 1], coords[b, 0], coords[b, 1])
    if mode == 1:
        return haversine_km(coords[a, 0], coords[a, 1], coords[b, 0], coords[b, 1])
    return matrix[a, b]


Location = Union[tuple[float, float], int]


@dataclass(frozen=True)
class Base:
    """A transportation base.

    ``location`` is ``(x, y)`` in km for planar data, ``(lat, lon)`` in
    degrees for spherical data, or the row number in an explicit matrix.
    """

    id: str
    location: Location


class MetricProvider:
    """Distance function over a fixed, registered set of bases.

    Use the :meth:`planar`, :meth:`spherical` or :meth:`from_matrix`
    constructors. Instances are read-only once built.
    """

    def __init__(self, mode: str, base_ids: Sequence[str],
                 coords: np.ndarray | None = None,
                 matrix: np.ndarray | None = None) -> None:
        if mode not in METRIC_MODES:
            raise ValueError(f"unknown metric mode {mode!r}; expected one of {METRIC_MODES}")
        self.mode = mode
        self.code = MODE_CODES[mode]
        self.base_ids = tuple(base_ids)
        self._rows = {bid: i for i, bid in enumerate(self.base_ids)}
        if len(self._rows) != len(self.base_ids):
            raise DuplicateIdError("duplicate base id in metric")
        n = len(self.base_ids)
        if coords is None:
            coords = np.zeros((n, 2))
        if matrix is None:
            matrix = np.zeros((0, 0))
        self.coords = np.ascontiguousarray(coords, dtype=np.float64)
        self.matrix = np.ascontiguousarray(matrix, dtype=np.float64)
        self.coords.setflags(write=False)
        self.matrix.setflags(write=False)
        if mode == MATRIX:
            if self.matrix.shape != (n, n):
                raise MixTransError(
                    f"distance matrix must be {n}x{n}, got {self.matrix.shape}")
            if (self.matrix < 0).any():
                raise MixTransError("distance matrix has negative entries")
            if np.any(np.diag(self.matrix) != 0):
                raise MixTransError("distance matrix has a nonzero diagonal")
            if not np.array_equal(self.matrix, self.matrix.T):
                raise MixTransError("distance matrix is not symmetric")
        elif self.coords.shape != (n, 2):
            raise MixTransError(f"coordinates must have shape ({n}, 2)")

    @classmethod
    def planar(cls, bases: Sequence[Base]) -> MetricProvider:
        coords = np.array([b.location for b in bases], dtype=np.float64).reshape(-1, 2)
        return cls(PLANAR, [b.id for b in bases], coords=coords)

    @classmethod
    def spherical(cls, bases: Sequence[Base]) -> MetricProvider:
        coords = np.array([b.location for b in bases], dtype=np.float64).reshape(-1, 2)
        if len(coords) and (np.abs(coords[:, 0]).max() > 90 or np.abs(coords[:, 1]).max() > 180):
            raise MixTransError("latitude must lie in [-90, 90] and longitude in [-180, 180]")
        return cls(SPHERICAL, [b.id for b in bases], coords=coords)

    @classmethod
    def from_matrix(cls, bases: Sequence[Base], matrix) -> MetricProvider:
        matrix = np.asarray(matrix, dtype=np.float64)
        rows = [b.location for b in bases]
        if rows != list(range(len(bases))):
            # reorder so that row i belongs to bases[i]
            matrix = matrix[np.ix_(rows, rows)]
        return cls(MATRIX, [b.id for b in bases], matrix=matrix)

    def __len__(self) -> int:
        return len(self.base_ids)

    def __contains__(self, base: Base | str) -> bool:
        return (base.id if isinstance(base, Base) else base) in self._rows

    def row(self, base: Base | str) -> int:
        bid = base.id if isinstance(base, Base) else base
        try:
            return self._rows[bid]
        except KeyError:
            raise UnknownBaseError(f"base {bid!r} is not known to this metric") from None

    def distance(self, a: Base | str, b: Base | str) -> float:
        return float(metric_distance(self.code, self.coords, self.matrix, self.row(a), self.row(b)))


def distance(metric: MetricProvider, a: Base | str, b: Base | str) -> float:
    """Distance ``d(a, b)`` in kilometres."""
    return metric.distance(a, b)


@dataclass(frozen=True)
class Lane:
    """A truckload request from ``start`` to ``end``; ``dist`` caches d(start, end)."""

    id: str
    start: Base
    end: Base
    dist: float

    def __post_init__(self) -> None:
        if not self.dist > 0:
            raise ZeroLengthLaneError(f"lane {self.id!r} has zero length")

    @classmethod
    def between(cls, lane_id: str, start: Base, end: Base, metric: MetricProvider) -> Lane:
        d = metric.distance(start, end)
        if not d > 0:
            raise ZeroLengthLaneError(
                f"lane {lane_id!r} has zero length ({start.id} -> {end.id})")
        return cls(lane_id, start, end, d)


@dataclass(frozen=True)
class MixedTransport:
    """An ordered lane triple with its reduction rate and the distances behind it."""

    t1: Lane
    t2: Lane
    t3: Lane
    x1: float
    x2: float
    z1: float
    z2: float
    rate: float = field(compare=False)

    @property
    def d1(self) -> float:
        return self.t1.dist

    @property
    def d2(self) -> float:
        return self.t2.dist

    @property
    def d3(self) -> float:
        return self.t3.dist

    @property
    def ids(self) -> tuple[str, str, str]:
        return (self.t1.id, self.t2.id, self.t3.id)

    @property
    def loaded_km(self) -> float:
        """Loaded distance when the three lanes are driven together."""
        return self.x1 + self.x2 + self.d3 + self.z2 + self.z1

    @property
    def separate_km(self) -> float:
        return self.d1 + self.d2 + self.d3


@dataclass(frozen=True)
class Query:
    t1: Lane
    r: float
    k: int | None = None

    def __post_init__(self) -> None:
        check_rate(self.r)
        if self.k is not None:
            check_k(self.k)


def check_rate(r: float) -> None:
    if not (MIN_RATE <= r < 1.0):
        raise ValueError(f"reduction rate r={r!r} outside the valid domain [1/3, 1)")


def check_k(k: int) -> None:
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")


def reduction_rate(t1: Lane, t2: Lane, t3: Lane,
                   metric: MetricProvider) -> tuple[float, MixedTransport]:
    """Reduction rate of the mixed transport ``(t1, t2, t3)``.

    The rate is (x1 + x2 + d3 + z2 + z1) / (d1 + d2 + d3): the loaded distance
    driven together over the loaded distance driven separately.
    """
    if len({t1.id, t2.id, t3.id}) != 3:
        raise MixTransError(f"lanes of a mixed transport must be distinct: {t1.id}, {t2.id}, {t3.id}")
    x1 = metric.distance(t1.start, t2.start)
    x2 = metric.distance(t2.start, t3.start)
    z1 = metric.distance(t2.end, t1.end)
    z2 = metric.distance(t3.end, t2.end)
    num = x1 + x2 + t3.dist + z2 + z1
    den = t1.dist + t2.dist + t3.dist
    rate = num / den
    return rate, MixedTransport(t1, t2, t3, x1, x2, z1, z2, rate)
