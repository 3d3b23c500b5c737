"""Directional binary code features on the wavelet approximation band.

The 50x50 approximation band is tiled into 100 cells of 5x5. Within a cell,
the first-order directional derivative at pixel (i, j) with distance d is

    0 deg    I(i, j) - I(i, j-d)        (left neighbor)
    45 deg   I(i, j) - I(i-d, j+d)      (upper-right neighbor)
    90 deg   I(i, j) - I(i-d, j)        (upper neighbor)
    135 deg  I(i, j) - I(i-d, j-d)      (upper-left neighbor)

with rows growing downward and columns growing rightward.  A derivative
binarizes to 1 when strictly positive, else 0.  Per direction, nine bits are
read at the cell center and its ring of eight neighbors (center first, then
left, up-left, up, up-right, right, down-right, down, down-left; first bit
most significant) giving a code in [0, 511].  The cell's coefficient is the
mean of its four directional codes divided by 511, so features live in [0, 1].
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from ._kernels_py import CODE_OFFSETS, DIRECTION_STEPS
from .errors import BoundsError, ShapeError

DIRECTIONS = (0, 45, 90, 135)
_STEP_BY_DIRECTION = dict(zip(DIRECTIONS, DIRECTION_STEPS))

CODE_MAX = 511  # 9-bit code
CELLS_PER_SIDE = 10  # fixed by the 100-feature contract


@dataclass(frozen=True)
class Cell:
    """One square tile of the approximation band."""

    values: np.ndarray
    row_index: int
    col_index: int

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 2 or vals.shape[0] != vals.shape[1]:
            raise ShapeError(f"cell must be square, got shape {vals.shape}")
        object.__setattr__(self, "values", vals)

    @property
    def size(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class DirectionalCode:
    """A 9-bit code along one direction, most significant bit first."""

    direction: int
    bits: tuple
    decimal: int

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}")
        if len(self.bits) != 9 or any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be nine 0/1 values")
        expected = 0
        for b in self.bits:
            expected = (expected << 1) | b
        if self.decimal != expected:
            raise ValueError(f"decimal {self.decimal} does not encode bits {self.bits}")


@dataclass(frozen=True)
class FeatureVector:
    """100 per-cell coefficients in [0, 1], row-major by cell."""

    coeffs: np.ndarray
    scale: float = float(CODE_MAX)

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if coeffs.ndim != 1 or coeffs.shape[0] != CELLS_PER_SIDE**2:
            raise ShapeError(f"expected {CELLS_PER_SIDE ** 2} coefficients, got shape {coeffs.shape}")
        if coeffs.min() < 0.0 or coeffs.max() > 1.0:
            raise ShapeError("coefficients must lie in [0, 1]")
        object.__setattr__(self, "coeffs", coeffs)

    def __len__(self) -> int:
        return self.coeffs.shape[0]


def partition_cells(ll: np.ndarray, cell_size: int = 5) -> list:
    """Tile a square grid into 100 non-overlapping cells, row-major.

    Cell (r, c) covers rows ``cell_size*r .. cell_size*r+cell_size-1`` and the
    same span of columns.  The grid side must be exactly ``10 * cell_size``.
    """
    ll = np.asarray(ll, dtype=np.float64)
    side = CELLS_PER_SIDE * cell_size
    if ll.shape != (side, side):
        raise ShapeError(f"expected a {side}x{side} grid for cell size {cell_size}, got {ll.shape}")
    cells = []
    for r in range(CELLS_PER_SIDE):
        for c in range(CELLS_PER_SIDE):
            tile = ll[r * cell_size : (r + 1) * cell_size, c * cell_size : (c + 1) * cell_size]
            cells.append(Cell(values=tile, row_index=r, col_index=c))
    return cells


def directional_derivative(cell: Cell, direction: int, d: int, i: int, j: int) -> float:
    """First-order derivative at cell pixel (i, j) along one direction."""
    if direction not in _STEP_BY_DIRECTION:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    if d < 1:
        raise BoundsError(f"distance must be positive, got {d}")
    size = cell.size
    if not (0 <= i < size and 0 <= j < size):
        raise BoundsError(f"pixel ({i}, {j}) outside {size}x{size} cell")
    dr, dc = _STEP_BY_DIRECTION[direction]
    ri, rj = i + d * dr, j + d * dc
    if not (0 <= ri < size and 0 <= rj < size):
        raise BoundsError(
            f"{direction} deg reference ({ri}, {rj}) of pixel ({i}, {j}) outside {size}x{size} cell"
        )
    return float(cell.values[i, j] - cell.values[ri, rj])


def binarize_derivative(v: float) -> int:
    """1 for strictly positive derivatives, 0 otherwise (zero included)."""
    return 1 if v > 0.0 else 0


def cell_code(cell: Cell, direction: int, d: int = 1) -> DirectionalCode:
    """The 9-bit directional code of a cell, read around its center.

    Bits are taken at the center pixel and its eight neighbors at distance
    ``d`` (center, left, up-left, up, up-right, right, down-right, down,
    down-left; first bit most significant).  Any bit position or derivative
    reference falling outside the cell raises BoundsError; for a 5x5 cell
    only d=1 fits.
    """
    if d < 1:
        raise BoundsError(f"distance must be positive, got {d}")
    center = cell.size // 2
    bits = []
    for pr, pc in CODE_OFFSETS:
        i, j = center + d * pr, center + d * pc
        if not (0 <= i < cell.size and 0 <= j < cell.size):
            raise BoundsError(
                f"code position ({i}, {j}) outside {cell.size}x{cell.size} cell (d={d})"
            )
        bits.append(binarize_derivative(directional_derivative(cell, direction, d, i, j)))
    decimal = 0
    for b in bits:
        decimal = (decimal << 1) | b
    return DirectionalCode(direction=direction, bits=tuple(bits), decimal=decimal)


def extract_features(ll: np.ndarray, d: int = 1, cell_size: int = 5) -> FeatureVector:
    """Compute the 100-coefficient feature vector of an approximation band.

    Cells are visited row-major; each coefficient is the mean of the cell's
    four directional code values divided by 511.
    """
    ll = np.asarray(ll, dtype=np.float64)
    side = CELLS_PER_SIDE * cell_size
    if ll.shape != (side, side):
        raise ShapeError(f"expected a {side}x{side} grid for cell size {cell_size}, got {ll.shape}")
    _check_geometry(cell_size, d)
    coeffs = kernels.dbc_features(ll, cell_size, d)
    return FeatureVector(coeffs=coeffs)


def _check_geometry(cell_size: int, d: int) -> None:
    """Reject (cell_size, d) combinations whose bit positions or derivative
    references cannot all fit inside one cell."""
    if d < 1:
        raise BoundsError(f"distance must be positive, got {d}")
    center = cell_size // 2
    for pr, pc in CODE_OFFSETS:
        for dr, dc in DIRECTION_STEPS:
            for i, j in ((center + d * pr, center + d * pc),
                         (center + d * (pr + dr), center + d * (pc + dc))):
                if not (0 <= i < cell_size and 0 <= j < cell_size):
                    raise BoundsError(
                        f"distance {d} does not fit a {cell_size}x{cell_size} cell"
                    )


def features_to_text(fv: FeatureVector) -> str:
    """Serialize a feature vector as comma-separated full-precision reals."""
    return ",".join(repr(float(c)) for c in fv.coeffs)


def features_from_text(line: str) -> FeatureVector:
    """Parse the serialization produced by :func:`features_to_text`."""
    parts = line.strip().split(",")
    try:
        coeffs = np.array([float(p) for p in parts], dtype=np.float64)
    except ValueError as exc:
        raise ShapeError(f"malformed feature vector text: {exc}") from exc
    return FeatureVector(coeffs=coeffs)
