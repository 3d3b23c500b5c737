"""One-level 2D Haar wavelet decomposition and its inverse.

The analysis uses orthonormal taps (pairwise sums and differences scaled by
1/sqrt(2)), so energy is preserved and the transform is exactly invertible.
Rows are filtered first, then columns of each half:

    ll  low/low      approximation
    lh  low/high     vertical detail (changes across rows)
    hl  high/low     horizontal detail (changes across columns)
    hh  high/high    diagonal detail

A constant image therefore lands entirely in ``ll`` with zero detail bands.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ShapeError


@dataclass(frozen=True)
class SubbandSet:
    """The four half-size subbands of one image."""

    ll: np.ndarray
    lh: np.ndarray
    hl: np.ndarray
    hh: np.ndarray
    source_width: int
    source_height: int

    def __post_init__(self):
        shape = (self.source_height // 2, self.source_width // 2)
        if self.source_height % 2 or self.source_width % 2:
            raise ShapeError(
                f"source dims must be even, got {self.source_width}x{self.source_height}"
            )
        for name in ("ll", "lh", "hl", "hh"):
            band = np.asarray(getattr(self, name), dtype=np.float64)
            if band.shape != shape:
                raise ShapeError(f"subband {name} has shape {band.shape}, expected {shape}")
            object.__setattr__(self, name, band)


def haar_dwt2(img: np.ndarray) -> SubbandSet:
    """Decompose an even-dimensioned grid into its four Haar subbands."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise ShapeError(f"expected a 2D grid, got shape {img.shape}")
    h, w = img.shape
    if h % 2 or w % 2:
        raise ShapeError(f"both dimensions must be even, got {w}x{h}")
    ll, lh, hl, hh = kernels.haar_dwt2(img)
    return SubbandSet(ll=ll, lh=lh, hl=hl, hh=hh, source_width=w, source_height=h)


def haar_idwt2(sb: SubbandSet) -> np.ndarray:
    """Reconstruct the source grid from its subbands."""
    return kernels.haar_idwt2(sb.ll, sb.lh, sb.hl, sb.hh)
