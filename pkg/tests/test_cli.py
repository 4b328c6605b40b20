"""End-to-end tests of the command line interface."""

import numpy as np
import pytest

from meyerkit.cli import main
from meyerkit.modelset import lattice_sample
from meyerkit.pgm import read_pgm, write_pgm
from meyerkit.pointset import write_point_file


def _kv(out):
    pairs = {}
    for line in out.strip().splitlines():
        for token in line.split():
            if "=" in token:
                key, _, val = token.partition("=")
                pairs[key] = val
    return pairs


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def model_file(tmp_path, capsys):
    path = str(tmp_path / "pts.txt")
    code, out, _ = _run(capsys, [
        "modelset", "gen", "--basis", "0.866,-0.129;0.364,0.987",
        "--window=-0.6,0.9", "--m", "1", "--n", "1", "--R", "400",
        "--out", path])
    assert code == 0
    return path


@pytest.fixture()
def grid_file(tmp_path):
    path = str(tmp_path / "z2.txt")
    write_point_file(lattice_sample(np.eye(2, dtype=np.int64), 24.0), path)
    return path


def test_modelset_gen_report(model_file, capsys):
    code, out, _ = _run(capsys, [
        "modelset", "gen", "--basis", "0.866,-0.129;0.364,0.987",
        "--window=-0.6,0.9", "--m", "1", "--n", "1", "--R", "400",
        "--out", model_file])
    pairs = _kv(out)
    assert code == 0
    assert int(pairs["count"]) > 1000
    assert abs(float(pairs["expected_density"]) - 1.6635) < 0.001


def test_modelset_ealpha_density(tmp_path, capsys):
    path = str(tmp_path / "e.txt")
    code, out, _ = _run(capsys, [
        "modelset", "ealpha", "--alpha", "0.41421356", "--eps", "0.1",
        "--Y", "20000", "--out", path])
    pairs = _kv(out)
    assert code == 0
    assert abs(float(pairs["density"]) - 0.2) < 0.01


def test_pointset_reports(model_file, capsys):
    code, out, _ = _run(capsys, [
        "pointset", "density", "--in", model_file, "--R", "50", "--grid", "10"])
    assert code == 0
    assert abs(float(_kv(out)["density"]) - 1.66) < 0.1
    code, out, _ = _run(capsys, ["pointset", "delone", "--in", model_file])
    assert code == 0
    pairs = _kv(out)
    assert float(pairs["r_packing"]) > 0.0
    assert float(pairs["R_covering"]) >= float(pairs["r_packing"])
    code, out, _ = _run(capsys, [
        "pointset", "wap", "--in", model_file, "--R", "60", "--pairs", "4",
        "--seed", "1", "--candidate-radius", "8"])
    assert code == 0
    assert float(_kv(out)["median_defect"]) <= 0.2


def test_freq_table_and_mean(model_file, tmp_path, capsys):
    table = str(tmp_path / "freq.txt")
    code, out, _ = _run(capsys, [
        "freq", "table", "--in", model_file, "--cutoff", "10", "--R", "380",
        "--out", table])
    assert code == 0
    assert int(_kv(out)["support"]) > 10
    code, out, _ = _run(capsys, ["freq", "mean", "--in", table, "--ball", "6"])
    assert code == 0
    pairs = _kv(out)
    assert abs(float(pairs["mean"]) - 1.66) < 0.35


def test_minkowski_verify_continuous_and_integer(model_file, tmp_path, capsys):
    code, out, _ = _run(capsys, [
        "minkowski", "verify", "--pts", model_file, "--body", "ball:r=5",
        "--cutoff", "12", "--R", "380", "--probe-factor2"])
    assert code == 0
    pairs = _kv(out)
    assert pairs["pass"] == "true"
    assert pairs["mode"] == "continuous"
    assert float(pairs["lhs"]) >= float(pairs["rhs"])
    assert abs(float(pairs["ratio"]) - 2.0) < 0.25
    ints = str(tmp_path / "e.txt")
    _run(capsys, ["modelset", "ealpha", "--alpha", "0.41421356", "--eps",
                  "0.15", "--Y", "4000", "--out", ints])
    code, out, _ = _run(capsys, [
        "minkowski", "verify", "--pts", ints, "--body", "ball:r=6",
        "--cutoff", "14", "--R", "3980", "--integer"])
    assert code == 0
    assert _kv(out)["mode"] == "integer"


def test_minkowski_classical_and_equality(capsys):
    code, out, _ = _run(capsys, [
        "minkowski", "classical", "--basis", "1,0;0,1", "--body", "ball:r=2.5"])
    pairs = _kv(out)
    assert code == 0
    assert pairs["count"] == "20" and pairs["bound"] == "9"
    code, out, _ = _run(capsys, ["minkowski", "equality", "--k", "3"])
    pairs = _kv(out)
    assert code == 0
    assert pairs["margin"] == "0"
    assert pairs["pass"] == "true"
    assert pairs["exact"] == "true"


def test_dirichlet_find_default_grid(capsys):
    code, out, _ = _run(capsys, [
        "dirichlet", "find", "--alpha", "0.4142135623730951", "--Q", "10"])
    pairs = _kv(out)
    assert code == 0
    assert pairs["u"] == "2.0,5.0"
    assert float(pairs["err"]) <= float(pairs["bound"])


def test_dirichlet_find_witness_missing(tmp_path, capsys):
    path = str(tmp_path / "even.txt")
    write_point_file(lattice_sample(2 * np.eye(2, dtype=np.int64), 50.0), path)
    code, out, err = _run(capsys, [
        "dirichlet", "find", "--alpha", "0.4142135623730951", "--Q", "10",
        "--pts", path, "--density", "1.0"])
    assert code == 1
    assert _kv(out)["found"] == "false"
    assert "error=" in err


def test_dirichlet_mass(grid_file, capsys):
    code, out, _ = _run(capsys, [
        "dirichlet", "mass", "--alpha", "0.4142135623730951", "--Q", "3",
        "--pts", grid_file, "--density", "1.0"])
    pairs = _kv(out)
    assert code == 0
    assert float(pairs["empirical"]) >= float(pairs["floor"])


def test_discretize_tau_and_seed_diff(grid_file, capsys):
    code, out, _ = _run(capsys, [
        "discretize", "tau", "--seed", "7", "--k", "2", "--R", "60"])
    assert code == 0
    taus = [float(tok.partition("=")[2]) for line in out.splitlines()
            for tok in line.split() if tok.startswith("tau=")]
    assert len(taus) == 2 and taus[0] >= taus[1]
    code, out, _ = _run(capsys, [
        "discretize", "seed-diff", "--in", grid_file, "--density", "1.0"])
    pairs = _kv(out)
    assert code == 0
    assert pairs["u0"] == "-3.0,0.0"
    assert pairs["pass"] == "true"


def test_discretize_degrade(tmp_path, capsys):
    src = str(tmp_path / "img.pgm")
    dst = str(tmp_path / "out.pgm")
    rng = np.random.default_rng(2)
    write_pgm(src, rng.integers(0, 256, size=(40, 50), dtype=np.uint8))
    code, out, _ = _run(capsys, [
        "discretize", "degrade", "--in", src, "--seed", "7", "--k", "3",
        "--out", dst])
    pairs = _kv(out)
    assert code == 0
    assert float(pairs["lost_final"]) > 0.0
    assert read_pgm(dst).shape == (40, 50)


def test_plot_flags_write_png(model_file, tmp_path, capsys):
    png = str(tmp_path / "fig.png")
    code, out, _ = _run(capsys, [
        "pointset", "density", "--in", model_file, "--R", "40", "--grid", "20",
        "--plot", png])
    assert code == 0
    with open(png, "rb") as fh:
        assert fh.read(8) == b"\x89PNG\r\n\x1a\n"


def test_reports_are_deterministic(model_file, tmp_path, capsys):
    argv = ["freq", "table", "--in", model_file, "--cutoff", "8",
            "--R", "380", "--out", str(tmp_path / "t.txt")]
    _, first, _ = _run(capsys, argv)
    _, second, _ = _run(capsys, argv)
    assert first == second


def test_input_errors_exit_two(tmp_path, capsys):
    code, _, err = _run(capsys, [
        "pointset", "density", "--in", str(tmp_path / "missing.txt"),
        "--R", "5", "--grid", "1"])
    assert code == 2 and "error=" in err
    code, _, err = _run(capsys, [
        "minkowski", "classical", "--basis", "1,0;0,1", "--body", "cube:r=1"])
    assert code == 2 and "error=" in err


def test_accept_subset(capsys):
    code, out, err = _run(capsys, ["accept", "--only", "1"])
    assert code == 0
    assert 'criterion=1 pass=true' in out
    assert "all_pass=true" in out
    assert "criterion 1" in err
