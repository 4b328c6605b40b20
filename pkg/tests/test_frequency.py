"""Tests for difference frequency estimation and table IO."""

import math
from fractions import Fraction

import numpy as np
import pytest

from meyerkit.frequency import (
    FrequencyTable,
    difference_frequency,
    frequency_table,
    lattice_frequency_table,
    mean_frequency,
    read_table_file,
    write_table_file,
)
from meyerkit.modelset import e_alpha_epsilon, lattice_sample

SQRT2M1 = math.sqrt(2.0) - 1.0


def test_unit_lattice_table_is_exactly_one():
    g = lattice_sample(np.eye(1, dtype=np.int64), 100.0)
    table = frequency_table(g, 10.0, 80.0)
    assert len(table.entries) == 21
    assert set(table.entries.values()) == {1.0}
    assert table.sample_integral
    assert table.rho((0.0,)) == 1.0
    assert table.rho((0.5,)) == 0.0


def test_single_difference_estimates_on_scaled_lattice():
    g = lattice_sample(np.array([[4]], dtype=np.int64), 400.0)
    assert difference_frequency(g, (4.0,), 300.0) == 1.0
    assert difference_frequency(g, (2.0,), 300.0) == 0.0


def test_estimator_is_symmetric():
    e = e_alpha_epsilon((SQRT2M1,), 0.1, 20_000)
    table = frequency_table(e, 50.0, 19_000.0)
    for key, rho in table.entries.items():
        mirrored = tuple(-c for c in key)
        assert mirrored in table.entries
        assert math.isclose(rho, table.entries[mirrored], rel_tol=1e-12)
    assert table.rho((0.0,)) == 1.0


def test_frequencies_lie_in_unit_interval_and_mass_tracks_density():
    e = e_alpha_epsilon((SQRT2M1,), 0.1, 20_000)
    table = frequency_table(e, 100.0, 19_800.0)
    vals = np.array(list(table.entries.values()))
    assert vals.min() >= 0.0 and vals.max() <= 1.0
    # ball averages of the table approximate the density of the set
    res = mean_frequency(table, 60.0, [(0.0,), (30.0,), (-30.0,)])
    assert abs(res.value - table.density.value) < 0.05
    assert res.max_deviation < 0.05
    assert len(res.per_center) == 3


def test_cutoff_erosion_precondition():
    g = lattice_sample(np.eye(1, dtype=np.int64), 50.0)
    with pytest.raises(ValueError):
        frequency_table(g, 20.0, 45.0)


def test_exact_lattice_table():
    table = lattice_frequency_table(np.array([[2, 0], [0, 1]], dtype=np.int64), 3.0)
    assert len(table.entries) == 17
    assert all(v == 1 and isinstance(v, Fraction) for v in table.entries.values())
    assert table.density.value == Fraction(1, 2)
    assert table.density.uncertainty() == 0.0
    assert table.sample_integral


def test_mean_frequency_on_unit_lattice_is_counting_ratio():
    g = lattice_sample(np.eye(1, dtype=np.int64), 100.0)
    table = frequency_table(g, 10.0, 80.0)
    res = mean_frequency(table, 3.0, [(0.0,)])
    assert math.isclose(res.value, 7.0 / 6.0, rel_tol=1e-12)
    assert res.max_deviation == 0.0
    with pytest.raises(ValueError):
        mean_frequency(table, 3.0, [(9.0,)])


def test_table_file_round_trip(tmp_path):
    e = e_alpha_epsilon((SQRT2M1,), 0.15, 3000)
    table = frequency_table(e, 25.0, 2900.0)
    path = str(tmp_path / "table.txt")
    write_table_file(table, path)
    back = read_table_file(path)
    assert back.dimension == table.dimension
    assert back.cutoff == table.cutoff
    assert math.isclose(float(back.density.value), float(table.density.value),
                        rel_tol=1e-12)
    assert set(back.entries) == set(table.entries)
    for key, rho in table.entries.items():
        assert math.isclose(back.entries[key], float(rho), rel_tol=1e-9)


def test_table_requires_zero_entry():
    with pytest.raises(ValueError):
        FrequencyTable(dimension=1, entries={(1.0,): 0.5},
                       density=lattice_frequency_table(np.eye(1, dtype=np.int64),
                                                       2.0).density,
                       cutoff=2.0, erosion_margin=0.0)
