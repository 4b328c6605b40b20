"""Tests for point samples, density estimation, and regularity checks."""

import math

import numpy as np
import pytest

from meyerkit.modelset import e_alpha_epsilon, jittered_lattice_sample, lattice_sample
from meyerkit.pointset import (
    PointSample,
    delone_parameters,
    density_at,
    difference_set,
    meyer_check,
    patch_defect,
    read_point_file,
    upper_density,
    write_point_file,
)

SQRT2M1 = math.sqrt(2.0) - 1.0


def test_sample_validation_and_integrality():
    s = PointSample(dimension=2, points=np.array([[0.0, 0.0], [1.0, 2.0]]),
                    region_radius=5.0)
    assert s.is_integral()
    assert s.points.dtype == np.int64
    assert s.size == 2
    with pytest.raises(ValueError):
        PointSample(dimension=2, points=np.array([[0.0, 0.0], [0.0, 0.0]]),
                    region_radius=5.0)
    with pytest.raises(ValueError):
        PointSample(dimension=2, points=np.array([[9.0, 0.0]]), region_radius=5.0)


def test_point_file_round_trip(tmp_path):
    path = str(tmp_path / "pts.txt")
    rng = np.random.default_rng(3)
    pts = np.unique(rng.normal(size=(40, 2)) * 3.0, axis=0)
    s = PointSample(dimension=2, points=pts, region_radius=50.0)
    write_point_file(s, path)
    back = read_point_file(path)
    assert back.dimension == 2
    assert back.region_radius == 50.0
    np.testing.assert_array_equal(np.sort(back.points, axis=0),
                                  np.sort(s.points, axis=0))


def test_point_file_rejects_malformed(tmp_path):
    path = str(tmp_path / "bad.txt")
    with open(path, "w") as fh:
        fh.write("1 2 3\n")
    with pytest.raises(ValueError):
        read_point_file(path)


def test_delone_parameters_anisotropic_lattice():
    g = lattice_sample(np.array([[3, 0], [0, 1]], dtype=np.int64), 30.0)
    params = delone_parameters(g)
    assert params.r_packing == 0.5
    assert math.isclose(params.R_covering, math.sqrt(2.5), rel_tol=1e-9)


def test_density_of_square_lattice():
    g = lattice_sample(np.eye(2, dtype=np.int64), 60.0)
    est = density_at(g, 10.0, [(0.0, 0.0)])
    assert math.isclose(est.value, 317.0 / (math.pi * 100.0), rel_tol=1e-12)
    top = upper_density(g, [10.0, 20.0, 30.0, 40.0], 7.0)
    assert abs(top.value - 1.0) < 0.05
    assert top.sup_over_centers
    assert len(top.trace) == 4
    assert top.uncertainty() < 0.02


def test_difference_set_of_scaled_lattice():
    g = lattice_sample(np.array([[3]], dtype=np.int64), 90.0)
    diffs = difference_set(g, 20.0)
    vals = np.sort(diffs.points.reshape(-1))
    assert np.all(vals % 3 == 0)
    np.testing.assert_array_equal(vals, np.arange(-18, 19, 3))


def test_meyer_check_split():
    e = e_alpha_epsilon((SQRT2M1,), 0.1, 20_000)
    good = meyer_check(e, 30.0)
    assert good.is_uniformly_discrete
    assert good.min_gap >= 1.0
    jit = jittered_lattice_sample(2, 2000.0)
    bad = meyer_check(jit, 30.0)
    assert not bad.is_uniformly_discrete
    assert bad.difference_count > 10 * good.difference_count


def test_patch_defect_lattice_alignment():
    z = lattice_sample(np.eye(1, dtype=np.int64), 200.0)
    v, defect = patch_defect(z, np.array([0.25]), np.array([50.25]), 30.0)
    assert defect == 0.0
    assert float(v[0]) == 50.0


def test_patch_defect_detects_misaligned_clouds():
    rng = np.random.default_rng(9)
    pts = np.sort(rng.uniform(-400.0, 400.0, size=900))
    pts = pts[np.nonzero(np.diff(pts, prepend=-1e9) > 1e-6)[0]]
    s = PointSample(dimension=1, points=pts.reshape(-1, 1), region_radius=400.0)
    worst = 0.0
    for _ in range(5):
        x, y = rng.uniform(-300.0, 300.0, size=2)
        _, defect = patch_defect(s, np.array([x]), np.array([y]), 80.0,
                                 candidate_radius=10.0)
        worst = max(worst, defect)
    assert worst > 0.5
