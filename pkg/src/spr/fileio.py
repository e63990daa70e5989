"""Signal and image file formats.

Complex signals travel as CSV with one "re,im" pair per line, full float
precision. 2D images travel as binary PGM (P5, 8-bit); gray levels map to
real amplitudes in [0, 1] on read. Complex-valued images get a companion
signal CSV next to the magnitude PGM, flattened row-major.
"""

import numpy as np


def read_signal_csv(path) -> np.ndarray:
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ValueError(f"{path}:{line_no}: expected 're,im', got {line!r}")
            values.append(complex(float(parts[0]), float(parts[1])))
    if not values:
        raise ValueError(f"{path}: no samples found")
    return np.asarray(values, dtype=np.complex128)


def write_signal_csv(path, z) -> None:
    z = np.asarray(z, dtype=np.complex128).ravel()
    with open(path, "w", encoding="utf-8") as fh:
        for value in z:
            fh.write(f"{value.real!r},{value.imag!r}\n")


def read_pgm(path) -> np.ndarray:
    """Read a binary 8-bit PGM into floats in [0, 1] (shape height x width)."""
    with open(path, "rb") as fh:
        data = fh.read()
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError(f"{path}: truncated PGM header")
        tokens.append(data[start:pos])
    if tokens[0] != b"P5":
        raise ValueError(f"{path}: not a binary PGM (P5) file")
    try:
        width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    except ValueError as exc:
        raise ValueError(f"{path}: malformed PGM header") from exc
    if width < 1 or height < 1 or not 0 < maxval <= 255:
        raise ValueError(f"{path}: unsupported PGM dimensions or depth")
    pos += 1  # single whitespace after maxval
    raster = data[pos:pos + width * height]
    if len(raster) != width * height:
        raise ValueError(f"{path}: PGM raster truncated")
    img = np.frombuffer(raster, dtype=np.uint8).astype(np.float64)
    return (img / maxval).reshape(height, width)


def write_pgm(path, image) -> None:
    """Write amplitudes in [0, 1] as a binary 8-bit PGM."""
    img = np.asarray(image, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError("image must be 2-d")
    levels = np.clip(np.rint(img * 255.0), 0, 255).astype(np.uint8)
    header = f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header + levels.tobytes())
