import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixtrans import Base, Lane, MetricProvider, Query, distance, reduction_rate
from mixtrans.model import (EARTH_RADIUS_KM, MIN_RATE, MixTransError, UnknownBaseError,
                            ZeroLengthLaneError)

coord = st.integers(-500_000, 500_000).map(lambda v: v / 1000)


def planar(*pts):
    bases = [Base(f"b{i}", p) for i, p in enumerate(pts)]
    return bases, MetricProvider.planar(bases)


def test_planar_distance_examples():
    (a, b), m = planar((0.0, 0.0), (3.0, 4.0))
    assert distance(m, a, a) == 0
    assert distance(m, a, b) == 5


def test_haversine_quarter_circumference():
    bases = [Base("p", (0.0, 0.0)), Base("q", (0.0, 90.0))]
    m = MetricProvider.spherical(bases)
    # 90 degrees of arc on a great circle
    assert distance(m, *bases) == pytest.approx(EARTH_RADIUS_KM * math.pi / 2, rel=1e-12)
    # 6371.0088 * pi / 2; the often-quoted 10007.543 km belongs to R = 6371.0
    assert distance(m, *bases) == pytest.approx(10007.557221, abs=1e-6)


def test_haversine_matches_spherical_law_of_cosines():
    rng = random.Random(3)
    for _ in range(200):
        lat1, lat2 = rng.uniform(-80, 80), rng.uniform(-80, 80)
        lon1, lon2 = rng.uniform(-180, 180), rng.uniform(-180, 180)
        p1, p2 = math.radians(lat1), math.radians(lat2)
        cosang = (math.sin(p1) * math.sin(p2)
                  + math.cos(p1) * math.cos(p2) * math.cos(math.radians(lon2 - lon1)))
        expected = EARTH_RADIUS_KM * math.acos(max(-1.0, min(1.0, cosang)))
        bases = [Base("a", (lat1, lon1)), Base("b", (lat2, lon2))]
        assert MetricProvider.spherical(bases).distance(*bases) == pytest.approx(expected, rel=1e-8, abs=1e-6)


def test_spherical_range_checked():
    with pytest.raises(MixTransError):
        MetricProvider.spherical([Base("a", (91.0, 0.0))])


@given(st.tuples(coord, coord), st.tuples(coord, coord))
def test_distance_symmetric_and_deterministic(p, q):
    (a, b), m = planar(p, q)
    assert m.distance(a, b) == m.distance(b, a) == m.distance(a, b)
    assert m.distance(a, b) >= 0
    assert m.distance(a, a) == 0


def test_matrix_metric_lookup_and_unknown_base():
    bases = [Base("x", 0), Base("y", 1)]
    m = MetricProvider.from_matrix(bases, [[0, 7], [7, 0]])
    assert m.distance("x", "y") == 7
    with pytest.raises(UnknownBaseError):
        m.distance("x", "nope")


def test_matrix_metric_rejects_bad_matrices():
    bases = [Base("x", 0), Base("y", 1)]
    for bad in ([[0, 1], [2, 0]], [[1, 1], [1, 0]], [[0, -1], [-1, 0]], [[0, 1, 2]]):
        with pytest.raises(MixTransError):
            MetricProvider.from_matrix(bases, bad)


def test_matrix_rows_follow_base_locations():
    bases = [Base("x", 1), Base("y", 0), Base("z", 2)]
    m = MetricProvider.from_matrix(bases, [[0, 3, 4], [3, 0, 5], [4, 5, 0]])
    assert m.distance("x", "y") == 3
    assert m.distance("x", "z") == 5
    assert m.distance("y", "z") == 4


def test_zero_length_lane_rejected():
    (a, b), m = planar((1.0, 1.0), (1.0, 1.0))
    with pytest.raises(ZeroLengthLaneError):
        Lane.between("L", a, b, m)
    with pytest.raises(ZeroLengthLaneError):
        Lane("L", a, a, 0.0)


def test_rate_e1(e1):
    _, metric, (l1, l2, l3), _ = e1
    rate, mt = reduction_rate(l1, l2, l3, metric)
    assert (mt.x1, mt.x2, mt.d3, mt.z2, mt.z1) == (1, 1, 6, 1, 1)
    assert rate == mt.rate == 10 / 24
    rate, mt = reduction_rate(l1, l3, l2, metric)
    assert (mt.x1, mt.x2, mt.d3, mt.z2, mt.z1) == (2, 1, 8, 1, 2)
    assert rate == 14 / 24
    assert mt.ids == ("L1", "L3", "L2")
    assert mt.loaded_km == 14 and mt.separate_km == 24


def test_rate_minimum_one_third_when_coincident():
    (a, b), m = planar((0.0, 0.0), (10.0, 0.0))
    lanes = [Lane.between(f"L{i}", a, b, m) for i in range(3)]
    rate, _ = reduction_rate(*lanes, m)
    assert rate == MIN_RATE


def test_rate_rejects_repeated_lane(e1):
    _, metric, (l1, l2, _), _ = e1
    with pytest.raises(MixTransError):
        reduction_rate(l1, l2, l1, metric)


@settings(max_examples=300)
@given(st.lists(st.tuples(coord, coord), min_size=6, max_size=6, unique=True))
def test_rate_never_below_one_third(pts):
    bases, m = planar(*pts)
    lanes = [Lane.between(f"L{i}", bases[2 * i], bases[2 * i + 1], m) for i in range(3)]
    rate, mt = reduction_rate(*lanes, m)
    assert rate >= MIN_RATE - 1e-12
    # pure function of its arguments
    assert reduction_rate(*lanes, m) == (rate, mt)


def test_cross_multiplied_comparison_agrees_with_division():
    rng = np.random.default_rng(11)
    num = rng.uniform(0, 1000, 200_000)
    den = rng.uniform(1e-3, 1000, 200_000)
    r = rng.uniform(1 / 3, 1, 200_000)
    cross = num <= r * den
    div = num / den <= r
    disagree = np.flatnonzero(cross != div)
    # only where num/den sits within an ulp or two of r
    gap = np.abs(num[disagree] / den[disagree] - r[disagree])
    assert np.all(gap <= 4 * np.spacing(r[disagree]))


def test_query_validation(e1):
    _, _, (l1, *_), _ = e1
    Query(l1, 1 / 3)
    Query(l1, 0.5, k=3)
    for bad in (0.2, 1.0, 1.5):
        with pytest.raises(ValueError):
            Query(l1, bad)
    with pytest.raises(ValueError):
        Query(l1, 0.5, k=0)
