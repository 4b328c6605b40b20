"""Tests for the binary PGM reader and writer."""

import numpy as np
import pytest

from meyerkit.pgm import read_pgm, write_pgm


def test_round_trip_is_bit_exact(tmp_path):
    rng = np.random.default_rng(0)
    img = rng.integers(0, 256, size=(37, 53), dtype=np.uint8)
    path = str(tmp_path / "img.pgm")
    write_pgm(path, img)
    back = read_pgm(path)
    assert back.dtype == np.uint8
    np.testing.assert_array_equal(back, img)
    write_pgm(path, back)
    np.testing.assert_array_equal(read_pgm(path), img)


def test_header_comments_are_tolerated(tmp_path):
    path = str(tmp_path / "c.pgm")
    body = bytes(range(6))
    with open(path, "wb") as fh:
        fh.write(b"P5\n# made by hand\n3 # width\n2\n# almost there\n255\n")
        fh.write(body)
    img = read_pgm(path)
    assert img.shape == (2, 3)
    assert img.tobytes() == body


def test_rejects_wrong_magic_and_depth(tmp_path):
    p1 = str(tmp_path / "bad1.pgm")
    with open(p1, "wb") as fh:
        fh.write(b"P2\n2 2\n255\n0 0 0 0\n")
    with pytest.raises(ValueError):
        read_pgm(p1)
    p2 = str(tmp_path / "bad2.pgm")
    with open(p2, "wb") as fh:
        fh.write(b"P5\n2 2\n65535\n" + bytes(8))
    with pytest.raises(ValueError):
        read_pgm(p2)
    p3 = str(tmp_path / "bad3.pgm")
    with open(p3, "wb") as fh:
        fh.write(b"P5\n4 4\n255\n" + bytes(3))
    with pytest.raises(ValueError):
        read_pgm(p3)


def test_write_rejects_non_uint8(tmp_path):
    path = str(tmp_path / "x.pgm")
    with pytest.raises(ValueError):
        write_pgm(path, np.zeros((4, 4), dtype=np.float32))
    with pytest.raises(ValueError):
        write_pgm(path, np.zeros(16, dtype=np.uint8))
