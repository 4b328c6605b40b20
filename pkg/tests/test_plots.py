"""Smoke tests for figure rendering to files."""

import numpy as np

from meyerkit import plots
from meyerkit.discretize import random_rotation_sequence, rate_of_injectivity
from meyerkit.frequency import frequency_table, lattice_frequency_table
from meyerkit.modelset import e_alpha_epsilon, lattice_sample
from meyerkit.pointset import upper_density


def _png_ok(path):
    with open(path, "rb") as fh:
        return fh.read(8) == b"\x89PNG\r\n\x1a\n"


def test_density_trace_figure(tmp_path):
    g = lattice_sample(np.eye(2, dtype=np.int64), 40.0)
    est = upper_density(g, [8.0, 16.0, 24.0, 32.0], 8.0)
    out = plots.save_density_trace(est, str(tmp_path / "density.png"))
    assert _png_ok(out)


def test_frequency_stem_figures(tmp_path):
    e = e_alpha_epsilon((0.4142135623730951,), 0.15, 2000)
    t1 = frequency_table(e, 20.0, 1900.0)
    assert _png_ok(plots.save_frequency_stem(t1, str(tmp_path / "stem1.png")))
    t2 = lattice_frequency_table(np.eye(2, dtype=np.int64), 5.0)
    assert _png_ok(plots.save_frequency_stem(t2, str(tmp_path / "stem2.png")))


def test_injectivity_trace_figure(tmp_path):
    seq = random_rotation_sequence(1, 3)
    trace = rate_of_injectivity(seq, 3, [80.0, 120.0])
    out = plots.save_injectivity_trace(trace, str(tmp_path / "tau.png"))
    assert _png_ok(out)


def test_loss_curve_figure(tmp_path):
    out = plots.save_loss_curve((0.1, 0.2, 0.25), str(tmp_path / "loss.png"))
    assert _png_ok(out)
