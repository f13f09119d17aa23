"""Image and artifact I/O: PNG (via Pillow), binary PGM (P5), JSON, CSV.

Every writer goes through an atomic replace (write to a temp file in the
destination directory, then ``os.replace``), so partially written artifacts
never appear under the final name. JSON output is deterministic: sorted keys,
fixed indentation, trailing newline, and no timestamps anywhere.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import tempfile
from pathlib import Path

import numpy as np
from PIL import Image

from .image import quantize_u8, to_grayscale

__all__ = [
    "load_image",
    "save_image",
    "read_pgm",
    "write_pgm",
    "atomic_write_bytes",
    "save_json",
    "save_csv",
    "sha256_file",
]


def atomic_write_bytes(path, data: bytes) -> None:
    """Write bytes to ``path`` through a temp file + rename in one directory."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except FileNotFoundError:
            pass
        raise


def read_pgm(path) -> np.ndarray:
    """Read a binary (P5) PGM file with maxval <= 255 into a float64 array."""
    raw = Path(path).read_bytes()
    tokens = []
    pos = 0
    # Header: magic, width, height, maxval — whitespace separated, with
    # '#' comments running to end of line.
    while len(tokens) < 4:
        if pos >= len(raw):
            raise ValueError(f"truncated PGM header in {path}")
        byte = raw[pos:pos + 1]
        if byte.isspace():
            pos += 1
        elif byte == b"#":
            eol = raw.find(b"\n", pos)
            pos = len(raw) if eol < 0 else eol + 1
        else:
            end = pos
            while end < len(raw) and not raw[end:end + 1].isspace():
                end += 1
            tokens.append(raw[pos:end])
            pos = end
    if tokens[0] != b"P5":
        raise ValueError(f"not a binary PGM (expected P5, got {tokens[0]!r}) in {path}")
    width, height, maxval = (int(t) for t in tokens[1:4])
    if width <= 0 or height <= 0:
        raise ValueError(f"bad PGM dimensions {width}x{height} in {path}")
    if not 0 < maxval <= 255:
        raise ValueError(f"unsupported PGM maxval {maxval} in {path}")
    pos += 1  # single whitespace byte after maxval
    pixels = raw[pos:pos + width * height]
    if len(pixels) < width * height:
        raise ValueError(f"truncated PGM pixel data in {path}")
    return (
        np.frombuffer(pixels, dtype=np.uint8)
        .reshape(height, width)
        .astype(np.float64)
    )


def write_pgm(path, image) -> None:
    """Write a 2-D array as a binary (P5) PGM with maxval 255."""
    data = quantize_u8(image)
    header = f"P5\n{data.shape[1]} {data.shape[0]}\n255\n".encode("ascii")
    atomic_write_bytes(path, header + data.tobytes())


def _png_bytes(array: np.ndarray) -> bytes:
    import io

    if array.ndim == 2:
        pil = Image.fromarray(array, mode="L")
    else:
        pil = Image.fromarray(array, mode="RGB")
    buffer = io.BytesIO()
    pil.save(buffer, format="PNG")
    return buffer.getvalue()


def load_image(path) -> np.ndarray:
    """Load a PNG or PGM file as a 2-D float64 grayscale array in [0, 255].

    Color PNGs are reduced with the standard luma weights (see
    ``image.to_grayscale``); grayscale inputs pass through unchanged.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such image: {path}")
    if path.suffix.lower() == ".pgm":
        return read_pgm(path)
    with Image.open(path) as pil:
        if pil.mode in ("L", "I;16", "I"):
            return np.asarray(pil.convert("L"), dtype=np.float64)
        rgb = np.asarray(pil.convert("RGB"), dtype=np.float64)
    return to_grayscale(rgb)


def save_image(path, image, format: str | None = None) -> None:
    """Save an array as PNG or PGM, chosen by ``format`` or the file suffix.

    2-D inputs are quantized to 8-bit grayscale; (H, W, 3) inputs are written
    as RGB (PNG only). Boolean arrays land as 0/255.
    """
    path = Path(path)
    fmt = (format or path.suffix.lstrip(".")).lower()
    array = np.asarray(image)
    if array.dtype == bool:
        array = array.astype(np.float64) * 255.0
    if fmt == "pgm":
        if array.ndim != 2:
            raise ValueError("PGM supports grayscale images only")
        write_pgm(path, array)
    elif fmt == "png":
        atomic_write_bytes(path, _png_bytes(quantize_u8(array)))
    else:
        raise ValueError(f"unsupported image format {fmt!r} (use png or pgm)")


def save_json(path, payload) -> None:
    """Write JSON deterministically: sorted keys, indent 2, trailing newline."""
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    atomic_write_bytes(path, text.encode("utf-8"))


def save_csv(path, header: list[str], rows: list[list]) -> None:
    """Write a CSV file with one header row; '\\n' line endings."""
    import io

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    atomic_write_bytes(path, buffer.getvalue().encode("utf-8"))


def sha256_file(path) -> str:
    """Hex SHA-256 of a file's bytes."""
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()
