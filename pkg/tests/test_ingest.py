import logging
import math

import numpy as np
import pytest

from mixtrans.ingest import (DataFormatError, Dataset, generate_synthetic, load_dataset,
                             validate_metric, write_dataset)
from mixtrans.model import (DuplicateIdError, MixTransError, UnknownBaseError,
                            ZeroLengthLaneError)


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_load_e1(e1_files):
    ds = load_dataset(*e1_files)
    assert len(ds.bases) == 6 and len(ds.lanes) == 3
    assert [t.dist for t in ds.lanes] == [10.0, 8.0, 6.0]


def test_unknown_base_names_id_and_line(tmp_path, e1_files):
    lanes = write(tmp_path / "lanes.csv", "lane_id,origin_base_id,dest_base_id\nL1,A,B\nL2,ZZZ,B\n")
    with pytest.raises(UnknownBaseError, match=r"lanes.csv:3.*ZZZ"):
        load_dataset(e1_files[0], lanes)


def test_zero_length_lane(tmp_path, e1_files):
    lanes = write(tmp_path / "lanes.csv", "lane_id,origin_base_id,dest_base_id\nL1,A,A\n")
    with pytest.raises(ZeroLengthLaneError, match="lanes.csv:2"):
        load_dataset(e1_files[0], lanes)


def test_duplicates_and_parse_errors(tmp_path, e1_files):
    lanes = write(tmp_path / "l.csv", "lane_id,origin_base_id,dest_base_id\nL1,A,B\nL1,C,D\n")
    with pytest.raises(DuplicateIdError, match="l.csv:3"):
        load_dataset(e1_files[0], lanes)
    bases = write(tmp_path / "b.csv", "base_id,x,y\nA,0,0\nA,1,1\n")
    with pytest.raises(DuplicateIdError, match="b.csv:3"):
        load_dataset(bases, e1_files[1])
    bases = write(tmp_path / "b2.csv", "base_id,x,y\nA,0,0\nB,one,1\n")
    with pytest.raises(DataFormatError, match="b2.csv:3"):
        load_dataset(bases, e1_files[1])
    bases = write(tmp_path / "b3.csv", "id,lat,lon\nA,0,0\n")
    with pytest.raises(DataFormatError, match="b3.csv:1"):
        load_dataset(bases, e1_files[1])


def test_distance_column_ignored_with_warning(tmp_path, e1_files, caplog):
    lanes = write(tmp_path / "lanes.csv",
                  "lane_id,origin_base_id,dest_base_id,distance\nL1,A,B,999\n")
    with caplog.at_level(logging.WARNING):
        ds = load_dataset(e1_files[0], lanes)
    assert ds.lanes[0].dist == 10.0
    assert "ignoring extra columns" in caplog.text


def test_spherical_dataset(tmp_path):
    bases = write(tmp_path / "b.csv", "base_id,lat,lon\nT,35.68,139.77\nO,34.69,135.50\n")
    lanes = write(tmp_path / "l.csv", "lane_id,origin_base_id,dest_base_id\nL1,T,O\n")
    ds = load_dataset(bases, lanes, "haversine")
    # spherical law of cosines as an independent check
    p1, p2 = math.radians(35.68), math.radians(34.69)
    ang = math.acos(math.sin(p1) * math.sin(p2)
                    + math.cos(p1) * math.cos(p2) * math.cos(math.radians(135.50 - 139.77)))
    assert ds.lanes[0].dist == pytest.approx(6371.0088 * ang, rel=1e-9)
    bad = write(tmp_path / "bad.csv", "base_id,lat,lon\nT,95,0\n")
    with pytest.raises(DataFormatError):
        load_dataset(bad, lanes, "haversine")


def test_matrix_dataset_and_force(tmp_path):
    bases = write(tmp_path / "b.csv", "base_id\na\nb\nc\n")
    lanes = write(tmp_path / "l.csv", "lane_id,origin_base_id,dest_base_id\nL1,a,c\nL2,b,c\n")
    good = write(tmp_path / "m.csv", "0,3,4\n3,0,5\n4,5,0\n")
    ds = load_dataset(bases, lanes, "matrix", good)
    assert [t.dist for t in ds.lanes] == [4.0, 5.0]
    bad = write(tmp_path / "bad.csv", "0,10,100\n10,0,10\n100,10,0\n")
    with pytest.raises(MixTransError, match="not a metric"):
        load_dataset(bases, lanes, "matrix", bad)
    ds = load_dataset(bases, lanes, "matrix", bad, force=True)
    assert ds.lanes[0].dist == 100.0
    short = write(tmp_path / "short.csv", "0,3\n3,0\n")
    with pytest.raises(DataFormatError):
        load_dataset(bases, lanes, "matrix", short)


@pytest.mark.parametrize("mode", ["euclidean", "matrix"])
def test_round_trip(tmp_path, mode):
    ds = generate_synthetic(15, 40, seed=3, width=70, height=40)
    if mode == "matrix":
        from mixtrans.ingest import build_dataset, make_metric
        from mixtrans.model import Base
        pts = np.array([b.location for b in ds.bases])
        mat = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1))
        bases = [Base(b.id, i) for i, b in enumerate(ds.bases)]
        ds = build_dataset(bases, [(t.id, t.start.id, t.end.id) for t in ds.lanes],
                           make_metric("matrix", bases, mat))
    paths = write_dataset(ds, tmp_path)
    again = load_dataset(paths["bases"], paths["lanes"], mode, paths.get("matrix"))
    assert again == ds


def test_generate_determinism_and_shape(tmp_path):
    a = generate_synthetic(50, 200, seed=7, width=100, height=100)
    b = generate_synthetic(50, 200, seed=7, width=100, height=100)
    c = generate_synthetic(50, 200, seed=8, width=100, height=100)
    assert a == b and a != c
    assert len(a.bases) == 50 and len(a.lanes) == 200
    xy = np.array([base.location for base in a.bases])
    assert xy.min() >= 0 and xy[:, 0].max() <= 100 and xy[:, 1].max() <= 100
    assert all(t.start.id != t.end.id and t.dist > 0 for t in a.lanes)
    p1 = write_dataset(a, tmp_path / "one")
    p2 = write_dataset(b, tmp_path / "two")
    for key in ("bases", "lanes"):
        assert p1[key].read_bytes() == p2[key].read_bytes()
    with pytest.raises(ValueError):
        generate_synthetic(1, 5, seed=0)


def test_generate_full_scale_shape():
    ds = generate_synthetic(4828, 16957, seed=1)
    assert len(ds.bases) == 4828 and len(ds.lanes) == 16957
    assert isinstance(ds, Dataset)


def test_validate_metric_examples():
    rng = np.random.default_rng(0)
    pts = rng.uniform(0, 100, (40, 2))
    pts[:10, 1] = 5.0   # collinear points stress rounding
    euclid = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1))
    assert validate_metric(euclid) == []

    asym = np.array([[0, 10.0], [9.0, 0]])
    (v,) = validate_metric(asym)
    assert v.kind == "symmetry" and v.indices == (0, 1)

    tri = np.array([[0, 10, 100], [10, 0, 10], [100, 10, 0]], dtype=float)
    found = validate_metric(tri)
    assert {v.kind for v in found} == {"triangle"}
    assert (0, 1, 2) in {v.indices for v in found}

    neg = np.array([[1.0, -1], [-1, 0]])
    assert {"negative", "diagonal"} <= {v.kind for v in validate_metric(neg)}
    with pytest.raises(ValueError):
        validate_metric(np.zeros((2, 3)))


def test_validate_metric_sampling():
    rng = np.random.default_rng(1)
    pts = rng.uniform(0, 100, (60, 2))
    m = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1))
    assert validate_metric(m, sample_budget=5000) == []
    m[3, 7] = m[7, 3] = 1e6
    assert any(v.kind == "triangle" for v in validate_metric(m, sample_budget=200_000))
