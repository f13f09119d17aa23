import hashlib
import json

import numpy as np
import pytest

from edgeforge.image_io import (
    atomic_write_bytes,
    load_image,
    read_pgm,
    save_csv,
    save_image,
    save_json,
    sha256_file,
    write_pgm,
)


def test_pgm_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    image = np.floor(rng.uniform(0, 256, (13, 17)))
    path = tmp_path / "x.pgm"
    write_pgm(path, image)
    assert np.array_equal(read_pgm(path), image)


def test_pgm_header_with_comments(tmp_path):
    raw = b"P5 # magic\n# a comment line\n 3 # width\n2\n255\n" + bytes(range(6))
    path = tmp_path / "c.pgm"
    path.write_bytes(raw)
    image = read_pgm(path)
    assert image.shape == (2, 3)
    assert image[1, 2] == 5.0


@pytest.mark.parametrize(
    "raw",
    [
        b"P2\n2 2\n255\n0 0 0 0",          # ascii variant unsupported
        b"P5\n2 2\n65535\n" + bytes(8),    # 16-bit maxval unsupported
        b"P5\n2 2\n255\n\x00\x01",         # truncated pixels
        b"P5\n2",                          # truncated header
        b"P5\n0 2\n255\n",                 # degenerate dimensions
    ],
)
def test_pgm_rejects_malformed(tmp_path, raw):
    path = tmp_path / "bad.pgm"
    path.write_bytes(raw)
    with pytest.raises(ValueError):
        read_pgm(path)


def test_png_grayscale_round_trip(tmp_path):
    image = np.arange(30, dtype=np.float64).reshape(5, 6) * 8
    path = tmp_path / "g.png"
    save_image(path, image)
    assert np.array_equal(load_image(path), image)


def test_png_color_loads_through_luma(tmp_path):
    rgb = np.zeros((2, 2, 3))
    rgb[0, 0] = (255, 0, 0)
    rgb[1, 1] = (0, 255, 0)
    path = tmp_path / "c.png"
    save_image(path, rgb)
    loaded = load_image(path)
    assert loaded[0, 0] == 76.0    # red by its luma weight
    assert loaded[1, 1] == 150.0   # green by its luma weight


def test_save_image_bool_maps_to_full_scale(tmp_path):
    edges = np.array([[True, False], [False, True]])
    path = tmp_path / "e.pgm"
    save_image(path, edges, format="pgm")
    assert read_pgm(path).tolist() == [[255.0, 0.0], [0.0, 255.0]]


def test_save_image_rejects_unknown_format(tmp_path):
    with pytest.raises(ValueError):
        save_image(tmp_path / "x.bmp", np.zeros((2, 2)))
    with pytest.raises(ValueError):
        save_image(tmp_path / "x.pgm", np.zeros((2, 2, 3)), format="pgm")


def test_load_image_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_image(tmp_path / "nope.png")


def test_atomic_write_leaves_no_temp_files(tmp_path):
    target = tmp_path / "sub" / "out.bin"
    atomic_write_bytes(target, b"payload")
    assert target.read_bytes() == b"payload"
    assert [p.name for p in target.parent.iterdir()] == ["out.bin"]


def test_save_json_is_byte_stable(tmp_path):
    payload = {"b": 2, "a": [1, 2, 3], "nested": {"z": 0, "y": 1}}
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save_json(p1, payload)
    save_json(p2, dict(reversed(list(payload.items()))))
    assert p1.read_bytes() == p2.read_bytes()
    assert p1.read_bytes().endswith(b"\n")
    assert json.loads(p1.read_text()) == payload


def test_save_csv_layout(tmp_path):
    path = tmp_path / "t.csv"
    save_csv(path, ["image", "n"], [["a.png", 3], ["b.png", 4]])
    assert path.read_text() == "image,n\na.png,3\nb.png,4\n"


def test_sha256_file(tmp_path):
    path = tmp_path / "h.bin"
    path.write_bytes(b"edge data")
    assert sha256_file(path) == hashlib.sha256(b"edge data").hexdigest()
