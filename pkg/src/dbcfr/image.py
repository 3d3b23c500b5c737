"""Grayscale image container and PNG/PGM file I/O.

Intensities are kept as float64 in [0, 255] throughout the pipeline;
quantization to 8-bit happens only when an image is written to disk.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import IoError, ShapeError

GRAY_MAX = 255.0


@dataclass(frozen=True)
class GrayImage:
    """A rectangular grid of grayscale intensities, row-major, in [0, 255]."""

    pixels: np.ndarray  # float64, shape (height, width)

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.float64)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ShapeError(f"expected a 2D grid with positive dims, got shape {px.shape}")
        if not np.all(np.isfinite(px)):
            raise ShapeError("image contains non-finite intensities")
        if px.min() < 0.0 or px.max() > GRAY_MAX:
            raise ShapeError("intensities must lie in [0, 255]")
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


def quantize(pixels: np.ndarray) -> np.ndarray:
    """Round float intensities to uint8, clipping to [0, 255]."""
    return np.clip(np.rint(pixels), 0, 255).astype(np.uint8)


def rescale_to_byte(grid: np.ndarray) -> np.ndarray:
    """Affinely map an arbitrary real grid onto [0, 255] uint8 (for debug dumps)."""
    grid = np.asarray(grid, dtype=np.float64)
    lo, hi = grid.min(), grid.max()
    if hi <= lo:
        return np.zeros(grid.shape, dtype=np.uint8)
    return quantize((grid - lo) * (GRAY_MAX / (hi - lo)))


def read_image(path) -> GrayImage:
    """Read a PNG or PGM file as a GrayImage.

    Color inputs are reduced to luminance with the same weights as
    :func:`dbcfr.preprocess.to_gray`.
    """
    path = Path(path)
    if not path.is_file():
        raise IoError(f"no such image file: {path}")
    suffix = path.suffix.lower()
    if suffix == ".pgm":
        return _read_pgm(path)
    if suffix == ".png":
        try:
            with Image.open(path) as im:
                im.load()
                if im.mode in ("RGB", "RGBA", "LA", "P"):
                    im = im.convert("RGB")
                    arr = np.asarray(im, dtype=np.float64)
                    from .preprocess import to_gray

                    return to_gray(arr[:, :, 0], arr[:, :, 1], arr[:, :, 2])
                if im.mode in ("L", "I;16", "I"):
                    arr = np.asarray(im.convert("L"), dtype=np.float64)
                    return GrayImage(arr)
                raise IoError(f"unsupported PNG mode {im.mode!r}: {path}")
        except (OSError, SyntaxError) as exc:
            raise IoError(f"cannot decode PNG {path}: {exc}") from exc
    raise IoError(f"unsupported image format {suffix!r} (expected .png or .pgm): {path}")


def write_image(img: GrayImage, path) -> None:
    """Write a GrayImage as PNG or binary PGM, quantized to 8 bits."""
    path = Path(path)
    data = quantize(img.pixels)
    suffix = path.suffix.lower()
    if suffix == ".pgm":
        _write_pgm(data, path)
    elif suffix == ".png":
        try:
            Image.fromarray(data, mode="L").save(path, format="PNG")
        except OSError as exc:
            raise IoError(f"cannot write PNG {path}: {exc}") from exc
    else:
        raise IoError(f"unsupported image format {suffix!r} (expected .png or .pgm): {path}")


def _read_pgm(path: Path) -> GrayImage:
    """Read a binary (P5) 8-bit PGM file."""
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc

    # Header: magic, width, height, maxval -- tokens separated by whitespace,
    # '#' starts a comment running to end of line.
    tokens = []
    pos = 0
    while len(tokens) < 4 and pos < len(raw):
        ch = raw[pos : pos + 1]
        if ch.isspace():
            pos += 1
        elif ch == b"#":
            while pos < len(raw) and raw[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        else:
            start = pos
            while pos < len(raw) and not raw[pos : pos + 1].isspace():
                pos += 1
            tokens.append(raw[start:pos])
    if len(tokens) < 4 or tokens[0] != b"P5":
        raise IoError(f"not a binary PGM (P5) file: {path}")
    try:
        width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    except ValueError as exc:
        raise IoError(f"malformed PGM header in {path}") from exc
    if maxval <= 0 or maxval > 255:
        raise IoError(f"only 8-bit PGM supported (maxval={maxval}): {path}")
    pos += 1  # single whitespace byte after maxval
    data = raw[pos : pos + width * height]
    if len(data) != width * height:
        raise IoError(f"truncated PGM pixel data in {path}")
    arr = np.frombuffer(data, dtype=np.uint8).reshape(height, width)
    return GrayImage(arr.astype(np.float64))


def _write_pgm(data: np.ndarray, path: Path) -> None:
    header = f"P5\n{data.shape[1]} {data.shape[0]}\n255\n".encode("ascii")
    try:
        path.write_bytes(header + data.tobytes())
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
