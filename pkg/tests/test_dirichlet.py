"""Tests for approximation witnesses and guaranteed slab mass."""

import math
from fractions import Fraction

import numpy as np
import pytest

from meyerkit.dirichlet import (
    ApproximationQuery,
    WitnessNotFound,
    find_witness,
    guaranteed_mass,
    slab_body,
)
from meyerkit.frequency import lattice_frequency_table
from meyerkit.modelset import lattice_sample

SQRT2M1 = math.sqrt(2.0) - 1.0
# continued fraction denominators of sqrt(2) - 1 = [0; 2, 2, 2, ...]
CONVERGENT_DENOMS = {1, 2, 5, 12, 29, 70, 169, 408}


def _grid(R):
    return lattice_sample(np.eye(2, dtype=np.int64), R)


def test_query_bounds():
    q = ApproximationQuery((SQRT2M1,), 10, _grid(25.0), 1.0)
    assert q.n == 1
    assert q.x_bound() == Fraction(1, 10)
    assert math.isclose(q.y_bound(), 20.0)


def test_slab_body_shape():
    q = ApproximationQuery((SQRT2M1,), 10, _grid(25.0), 1.0)
    body = slab_body(q)
    assert body.dimension == 2
    assert body.contains((2.05, 5.0))
    assert not body.contains((2.3, 5.0))
    assert not body.contains((0.0, 21.0))
    # unit determinant forms: volume 2/Q * 4Q = 8 independent of Q
    assert math.isclose(float(body.volume()), 8.0)


def test_witness_is_best_convergent():
    q = ApproximationQuery((SQRT2M1,), 10, _grid(25.0), 1.0)
    w = find_witness(q)
    assert tuple(float(c) for c in w.u) == (2.0, 5.0)
    assert float(w.dy) == 5.0
    va = np.asarray(w.v, dtype=np.float64)
    wa = np.asarray(w.w, dtype=np.float64)
    np.testing.assert_allclose(va - wa, np.asarray(w.u, dtype=np.float64))
    assert float(w.errors[0]) <= float(w.bounds[0])


def test_witness_denominators_are_convergents():
    for Q in (3, 10, 30, 100):
        grid = _grid(2.0 * Q + 2.0)
        q = ApproximationQuery((SQRT2M1,), Q, grid, 1.0)
        w = find_witness(q)
        assert int(float(w.dy)) in CONVERGENT_DENOMS, (Q, w.dy)
        # slab constraint |x - alpha y| <= 1/Q holds for the difference
        err = abs(float(w.u[0]) - SQRT2M1 * float(w.dy))
        assert err <= 1.0 / Q + 1e-9


def test_rational_target_is_exact():
    q = ApproximationQuery((Fraction(2, 5),), 5, _grid(12.0), 1.0)
    w = find_witness(q)
    assert isinstance(w.errors[0], Fraction)
    assert w.errors[0] <= Fraction(2, 1) / (Fraction(float(w.dy)) ** 2)


def test_witness_not_found_on_sparse_subset():
    # even sublattice with claimed unit density: no admissible pair
    gamma = lattice_sample(2 * np.eye(2, dtype=np.int64), 50.0)
    q = ApproximationQuery((SQRT2M1,), 10, gamma, 1.0)
    with pytest.raises(WitnessNotFound):
        find_witness(q)


def test_undersized_sample_is_rejected():
    q = ApproximationQuery((SQRT2M1,), 10, _grid(6.0), 1.0)
    with pytest.raises(ValueError):
        find_witness(q)


def test_guaranteed_mass_on_unit_lattice():
    Q = 3
    grid = _grid(30.0)
    q = ApproximationQuery((SQRT2M1,), Q, grid, 1.0)
    slab = slab_body(q)
    table = lattice_frequency_table(np.eye(2, dtype=np.int64),
                                    slab.circumradius() + 1.0)
    rep = guaranteed_mass(q, table)
    assert rep.empirical_sum == 6
    assert rep.empirical_sum >= rep.theoretical_floor
    assert rep.passed


def test_two_dimensional_target_is_not_supported_yet():
    gamma = lattice_sample(np.eye(3, dtype=np.int64), 12.0)
    q = ApproximationQuery((SQRT2M1, 0.3), 4, gamma, 1.0)
    with pytest.raises(NotImplementedError):
        find_witness(q)
