"""Numpy implementations of the hot kernels.

Used when the compiled extension (``dbcfr._kernels_cy``) is unavailable.
Both backends implement the same contracts and, because the arithmetic is
written identically (same constants, same operation order, contraction
disabled in the compiled build), produce bit-identical results.

Input validation lives in the calling modules; kernels assume clean input.
"""

import numpy as np

BACKEND_NAME = "python"

# Bit positions of a directional code, most significant first: the cell
# center, then its ring traversed left, up-left, up, up-right, right,
# down-right, down, down-left.  Offsets are (row, col) multiples of the
# derivative distance.
CODE_OFFSETS = ((0, 0), (0, -1), (-1, -1), (-1, 0), (-1, 1),
                (0, 1), (1, 1), (1, 0), (1, -1))

# Unit steps (row, col) toward the reference pixel of each directional
# derivative: 0 deg = left, 45 deg = up-right, 90 deg = up, 135 deg = up-left.
DIRECTION_STEPS = ((0, -1), (-1, 1), (-1, 0), (-1, -1))


def haar_dwt2(x: np.ndarray):
    """One-level orthonormal Haar analysis; returns (ll, lh, hl, hh).

    Rows pass then columns pass with 1/sqrt(2) taps; the two scale factors
    are folded into a single exact multiply by 0.5 per output, so integer
    grids produce exact subband values.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    # rows pass (unscaled): pair adjacent columns
    even, odd = x[:, 0::2], x[:, 1::2]
    rsum = even + odd
    rdiff = even - odd
    # columns pass: pair adjacent rows, applying both 1/sqrt(2) factors at once
    ll = (rsum[0::2, :] + rsum[1::2, :]) * 0.5
    lh = (rsum[0::2, :] - rsum[1::2, :]) * 0.5
    hl = (rdiff[0::2, :] + rdiff[1::2, :]) * 0.5
    hh = (rdiff[0::2, :] - rdiff[1::2, :]) * 0.5
    return ll, lh, hl, hh


def haar_idwt2(ll, lh, hl, hh) -> np.ndarray:
    """Exact inverse of :func:`haar_dwt2` up to floating round-off."""
    ll = np.asarray(ll, dtype=np.float64)
    lh = np.asarray(lh, dtype=np.float64)
    hl = np.asarray(hl, dtype=np.float64)
    hh = np.asarray(hh, dtype=np.float64)
    hh_rows, hw = ll.shape
    rsum = np.empty((2 * hh_rows, hw), dtype=np.float64)
    rdiff = np.empty((2 * hh_rows, hw), dtype=np.float64)
    rsum[0::2, :] = ll + lh
    rsum[1::2, :] = ll - lh
    rdiff[0::2, :] = hl + hh
    rdiff[1::2, :] = hl - hh
    x = np.empty((2 * hh_rows, 2 * hw), dtype=np.float64)
    x[:, 0::2] = (rsum + rdiff) * 0.5
    x[:, 1::2] = (rsum - rdiff) * 0.5
    return x


def resize_bilinear(img: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resize with pixel-center alignment, clamped at the borders."""
    img = np.asarray(img, dtype=np.float64)
    in_h, in_w = img.shape

    sy = (np.arange(out_h, dtype=np.float64) + 0.5) * (in_h / out_h) - 0.5
    sx = (np.arange(out_w, dtype=np.float64) + 0.5) * (in_w / out_w) - 0.5
    np.clip(sy, 0.0, in_h - 1.0, out=sy)
    np.clip(sx, 0.0, in_w - 1.0, out=sx)

    y0 = np.floor(sy).astype(np.intp)
    x0 = np.floor(sx).astype(np.intp)
    fy = (sy - y0)[:, None]
    fx = (sx - x0)[None, :]
    y1 = np.minimum(y0 + 1, in_h - 1)
    x1 = np.minimum(x0 + 1, in_w - 1)

    top = (1.0 - fx) * img[np.ix_(y0, x0)] + fx * img[np.ix_(y0, x1)]
    bottom = (1.0 - fx) * img[np.ix_(y1, x0)] + fx * img[np.ix_(y1, x1)]
    return (1.0 - fy) * top + fy * bottom


def dbc_features(ll: np.ndarray, cell_size: int, d: int) -> np.ndarray:
    """Per-cell directional-code coefficients of a square approximation band.

    The grid is tiled into non-overlapping ``cell_size`` x ``cell_size`` cells
    (row-major).  For each cell, four 9-bit codes (one per direction) are read
    off the thresholded directional derivatives around the cell center; the
    coefficient is the mean of the four code values scaled into [0, 1].
    """
    ll = np.asarray(ll, dtype=np.float64)
    side = ll.shape[0]
    n = side // cell_size
    # cells[r, c] is the (cell_size, cell_size) tile at cell coordinates (r, c)
    cells = ll.reshape(n, cell_size, n, cell_size).transpose(0, 2, 1, 3)
    center = cell_size // 2

    totals = np.zeros((n, n), dtype=np.int64)
    for dr, dc in DIRECTION_STEPS:
        code = np.zeros((n, n), dtype=np.int64)
        for pr, pc in CODE_OFFSETS:
            i = center + d * pr
            j = center + d * pc
            deriv = cells[:, :, i, j] - cells[:, :, i + d * dr, j + d * dc]
            code = (code << 1) | (deriv > 0.0)
        totals += code
    return (totals.astype(np.float64) / 4.0 / 511.0).reshape(-1)
