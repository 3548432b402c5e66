"""File formats for the command line: 1-D float files and binary PGM images.

Signals travel as plain text (one float per line) or raw little-endian
float64; images as 8-bit binary PGM (P5).  Writers are the exact inverses
of the readers up to the formats' own precision (text uses 17 significant
digits, so float64 round-trips losslessly).
"""

from __future__ import annotations

import warnings

import numpy as np

__all__ = [
    "read_signal",
    "write_signal",
    "read_pgm",
    "write_pgm",
]


def read_signal(path, raw: bool = False) -> np.ndarray:
    """Load a 1-D float array from text (one value per line) or raw <f8."""
    if raw:
        data = np.fromfile(path, dtype="<f8")
        if data.size == 0:
            raise ValueError(f"{path}: empty raw float64 file")
        return data.astype(float)
    try:
        with warnings.catch_warnings():
            # an empty file is reported as an error below, not as a warning
            warnings.simplefilter("ignore", UserWarning)
            data = np.loadtxt(path, dtype=float, ndmin=1)
    except ValueError as exc:
        raise ValueError(f"{path}: not a plain list of numbers ({exc})") from None
    if data.ndim != 1:
        raise ValueError(f"{path}: expected one value per line")
    if data.size == 0:
        raise ValueError(f"{path}: empty signal file")
    return data


def write_signal(path, values, raw: bool = False) -> None:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError("can only write 1-D signals")
    if raw:
        arr.astype("<f8").tofile(path)
    else:
        np.savetxt(path, arr, fmt="%.17g")


def _next_token(buf: bytes, pos: int) -> tuple[bytes, int]:
    """Next whitespace-delimited header token, skipping '#' comments."""
    n = len(buf)
    while pos < n:
        c = buf[pos : pos + 1]
        if c == b"#":
            while pos < n and buf[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not buf[pos : pos + 1].isspace() and buf[pos : pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise ValueError("truncated PGM header")
    return buf[start:pos], pos


def read_pgm(path) -> np.ndarray:
    """Read a binary (P5) 8-bit PGM into a float array of shape (h, w)."""
    with open(path, "rb") as fh:
        buf = fh.read()
    try:
        magic, pos = _next_token(buf, 0)
        if magic != b"P5":
            raise ValueError(f"not a binary PGM (magic {magic!r}, expected P5)")
        fields = []
        for _ in range(3):
            token, pos = _next_token(buf, pos)
            fields.append(int(token))
        width, height, maxval = fields
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None
    if width < 1 or height < 1:
        raise ValueError(f"{path}: bad dimensions {width}x{height}")
    if not 1 <= maxval <= 255:
        raise ValueError(f"{path}: only 8-bit PGM supported (maxval {maxval})")
    pos += 1  # single whitespace byte after maxval
    pixels = buf[pos : pos + width * height]
    if len(pixels) < width * height:
        raise ValueError(f"{path}: pixel data truncated")
    return (
        np.frombuffer(pixels, dtype=np.uint8)
        .reshape(height, width)
        .astype(float)
    )


def write_pgm(path, image) -> None:
    """Write a float array as 8-bit P5, clamping to [0, 255] and rounding."""
    arr = np.asarray(image, dtype=float)
    if arr.ndim != 2:
        raise ValueError("can only write 2-D images")
    pixels = np.rint(np.clip(arr, 0.0, 255.0)).astype(np.uint8)
    height, width = pixels.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())
