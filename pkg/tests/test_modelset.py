"""Tests for cut-and-project generation and near-integer multiple sets."""

import math

import numpy as np
import pytest

from meyerkit.modelset import (
    Box,
    CutAndProjectScheme,
    e_alpha_epsilon,
    e_alpha_scheme,
    expected_density,
    generate,
    jittered_lattice_sample,
    lattice_sample,
)

SQRT2M1 = math.sqrt(2.0) - 1.0
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _planar_scheme():
    basis = np.array([[0.866, -0.129], [0.364, 0.987]])
    return CutAndProjectScheme(internal_dim=1, physical_dim=1, basis=basis,
                               window=Box(lo=(-0.6,), hi=(0.9,)))


def test_small_projection_instance():
    sample = generate(_planar_scheme(), 2.0)
    got = sorted(round(float(p[0]), 3) for p in sample.points)
    assert got == [-1.974, -0.987, 0.0, 0.364, 0.987, 1.351, 1.974]


def test_generated_density_matches_prediction():
    scheme = _planar_scheme()
    sample = generate(scheme, 1000.0)
    measured = sample.size / 2000.0
    assert abs(measured - expected_density(scheme)) / expected_density(scheme) < 0.02


def test_lattice_sample_enumeration():
    g = lattice_sample(np.array([[3, 0], [0, 1]], dtype=np.int64), 5.0)
    assert g.size == 29
    assert g.is_integral()
    np.testing.assert_array_equal(g.periods, np.array([[3.0, 0.0], [0.0, 1.0]]))
    norms = (g.points.astype(np.float64) ** 2).sum(axis=1)
    assert norms.max() <= 25.0 + 1e-9


def test_box_and_scheme_validation():
    with pytest.raises(ValueError):
        Box(lo=(1.0,), hi=(0.0,))
    with pytest.raises(ValueError):
        CutAndProjectScheme(internal_dim=1, physical_dim=1,
                            basis=np.array([[1.0, 1.0], [1.0, 1.0]]),
                            window=Box(lo=(-1.0,), hi=(1.0,)))
    with pytest.raises(ValueError):
        CutAndProjectScheme(internal_dim=2, physical_dim=1,
                            basis=np.eye(2),
                            window=Box(lo=(-1.0, -1.0), hi=(1.0, 1.0)))


def test_rational_target_gives_even_integers():
    sample = e_alpha_epsilon((0.5,), 0.2, 100)
    vals = np.sort(sample.points.reshape(-1))
    np.testing.assert_array_equal(vals, np.arange(-100, 101, 2))


def test_near_integer_set_matches_projection_scheme():
    eps = 0.15
    direct = e_alpha_epsilon((SQRT2M1,), eps, 500)
    scheme = e_alpha_scheme((SQRT2M1,), eps)
    projected = generate(scheme, 500.0)
    a = {int(v) for v in direct.points.reshape(-1).tolist()}
    b = {int(round(float(v))) for v in projected.points.reshape(-1).tolist()}
    assert a == b


def test_near_integer_set_density_tends_to_window_volume():
    for alpha in (SQRT2M1, GOLDEN):
        for eps in (0.07, 0.2):
            sample = e_alpha_epsilon((alpha,), eps, 10_000)
            measured = sample.size / 20_000.0
            assert abs(measured - 2.0 * eps) / (2.0 * eps) < 0.02


def test_near_integer_set_rejects_degenerate_tolerance():
    for eps in (0.0, 0.5, 0.7):
        with pytest.raises(ValueError):
            e_alpha_epsilon((SQRT2M1,), eps, 100)


def test_simultaneous_membership_condition():
    eps = 0.1
    sample = e_alpha_epsilon((SQRT2M1, GOLDEN), eps, 5000)
    ys = sample.points.reshape(-1).astype(np.float64)
    for alpha in (SQRT2M1, GOLDEN):
        frac = np.abs(ys * alpha - np.round(ys * alpha))
        assert frac.max() < eps
    assert sample.size > 0


def test_jittered_sample_is_seeded_and_bounded():
    a = jittered_lattice_sample(5, 300.0)
    b = jittered_lattice_sample(5, 300.0)
    np.testing.assert_array_equal(a.points, b.points)
    c = jittered_lattice_sample(6, 300.0)
    assert not np.array_equal(a.points, c.points)
    vals = a.points.reshape(-1)
    assert np.abs(vals - np.round(vals)).max() <= 0.3 + 1e-12
    assert a.size == 601
