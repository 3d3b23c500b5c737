"""Grayscale conversion, foreground cropping, and resizing to 100x100.

Cropping binarizes the image at an automatically chosen threshold (Otsu) and
scans each row's left half left-to-right and right half right-to-left for the
first foreground pixel; fully-background rows are trimmed from the top and
bottom.  The crop is the axis-aligned box spanned by the recorded positions,
which for any image with foreground on both sides equals the foreground
bounding box.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import CropError, ShapeError, ThresholdError
from .image import GRAY_MAX, GrayImage

# ITU-R BT.601 luminance weights
LUMA_WEIGHTS = (0.299, 0.587, 0.114)

TARGET_SIZE = 100


@dataclass(frozen=True)
class CropBounds:
    """Per-row scan positions and the retained row range.

    ``left[r]`` is the first foreground column found scanning row r's left
    half left-to-right, ``right[r]`` the first found scanning the right half
    right-to-left; -1 marks a half with no foreground.  Rows outside
    ``top..bottom`` carry no foreground at all.
    """

    left: np.ndarray
    right: np.ndarray
    top: int
    bottom: int


def to_gray(r: np.ndarray, g: np.ndarray, b: np.ndarray) -> GrayImage:
    """Weighted BT.601 luminance of three equal-shaped channels in [0, 255]."""
    r = np.asarray(r, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if not (r.shape == g.shape == b.shape):
        raise ShapeError(f"channel shapes differ: {r.shape}, {g.shape}, {b.shape}")
    if r.ndim != 2:
        raise ShapeError(f"channels must be 2D, got shape {r.shape}")
    luma = LUMA_WEIGHTS[0] * r + LUMA_WEIGHTS[1] * g + LUMA_WEIGHTS[2] * b
    return GrayImage(np.clip(luma, 0.0, GRAY_MAX))


def binarize(img: GrayImage, threshold: float) -> np.ndarray:
    """0/1 foreground mask: pixel >= threshold maps to 1."""
    return (img.pixels >= threshold).astype(np.uint8)


def otsu_threshold(img: GrayImage) -> int:
    """256-bin Otsu threshold (between-class variance maximizer).

    Pixels are binned by their integer part; the returned threshold t
    separates classes {p < t} and {p >= t}, matching :func:`binarize`.
    Ties break toward the smallest threshold.
    """
    px = img.pixels
    if px.min() == px.max():
        raise ThresholdError("constant image has no Otsu threshold")
    hist = np.bincount(np.floor(px).astype(np.intp).clip(0, 255).ravel(), minlength=256)
    hist = hist.astype(np.float64)

    total = hist.sum()
    # w0/sum0 at candidate t cover bins 0..t-1 (class {p < t}); t ranges 0..255
    cum = np.cumsum(hist)
    cum_val = np.cumsum(hist * np.arange(256))
    w0 = np.concatenate(([0.0], cum[:-1])) / total
    sum0 = np.concatenate(([0.0], cum_val[:-1]))
    w1 = 1.0 - w0

    with np.errstate(invalid="ignore", divide="ignore"):
        mu0 = np.where(w0 > 0, sum0 / (w0 * total), 0.0)
        mu1 = np.where(w1 > 0, (cum_val[-1] - sum0) / (w1 * total), 0.0)
    sigma_b = np.where((w0 > 0) & (w1 > 0), w0 * w1 * (mu0 - mu1) ** 2, 0.0)
    return int(np.argmax(sigma_b))  # argmax returns the first (smallest) maximizer


def scan_crop(img: GrayImage, threshold: float):
    """Crop to the box spanned by per-row half scans of the binarized image.

    Returns ``(cropped, bounds)``.  Raises CropError when no pixel reaches the
    threshold.  Every above-threshold pixel of the input is inside the crop:
    when one half carries no foreground anywhere, the corresponding bound
    falls back to the global foreground extreme.
    """
    fg = binarize(img, threshold)
    if not fg.any():
        raise CropError(f"no pixel reaches threshold {threshold}")
    h, w = fg.shape
    mid = w // 2

    left = np.full(h, -1, dtype=np.intp)
    right = np.full(h, -1, dtype=np.intp)
    left_half, right_half = fg[:, :mid], fg[:, mid:]
    rows_l = left_half.any(axis=1)
    rows_r = right_half.any(axis=1)
    left[rows_l] = np.argmax(left_half[rows_l], axis=1)
    # scanning right-to-left = last foreground column of the right half
    right[rows_r] = w - 1 - np.argmax(right_half[rows_r, ::-1], axis=1)

    fg_rows = np.flatnonzero(fg.any(axis=1))
    top, bottom = int(fg_rows[0]), int(fg_rows[-1])

    fg_cols = np.flatnonzero(fg.any(axis=0))
    col_lo = int(left[rows_l].min()) if rows_l.any() else int(fg_cols[0])
    col_hi = int(right[rows_r].max()) if rows_r.any() else int(fg_cols[-1])

    cropped = GrayImage(img.pixels[top : bottom + 1, col_lo : col_hi + 1])
    return cropped, CropBounds(left=left, right=right, top=top, bottom=bottom)


def resize(img: GrayImage, out_w: int, out_h: int) -> GrayImage:
    """Bilinear resize with pixel-center alignment."""
    if out_w < 1 or out_h < 1:
        raise ShapeError(f"output dims must be positive, got {out_w}x{out_h}")
    out = kernels.resize_bilinear(img.pixels, out_h, out_w)
    return GrayImage(np.clip(out, 0.0, GRAY_MAX))


def preprocess(img: GrayImage, size: int = TARGET_SIZE) -> GrayImage:
    """Full preprocessing: Otsu threshold, scan crop, resize to size x size."""
    threshold = otsu_threshold(img)
    cropped, _ = scan_crop(img, threshold)
    return resize(cropped, size, size)
