"""End-to-end wiring: image file -> preprocessing -> DWT -> DBC features."""

from dataclasses import dataclass
from pathlib import Path

from . import dbc, dwt
from .dbc import FeatureVector
from .errors import ConfigError, DbcfrError
from .image import read_image
from .matcher import Gallery
from .preprocess import preprocess


@dataclass(frozen=True)
class PipelineConfig:
    image_size: int = 100
    cell_size: int = 5
    dbc_distance: int = 1

    def __post_init__(self):
        if self.image_size < 2 or self.image_size % 2 != 0:
            raise ConfigError(f"image_size must be even and >= 2, got {self.image_size}")
        half = self.image_size // 2
        if half % self.cell_size != 0:
            raise ConfigError(
                f"cell_size {self.cell_size} does not tile the {half}x{half} subband"
            )
        if self.dbc_distance < 1:
            raise ConfigError(f"dbc_distance must be positive, got {self.dbc_distance}")


DEFAULT_CONFIG = PipelineConfig()


def extract_image_features(path, config: PipelineConfig = DEFAULT_CONFIG) -> FeatureVector:
    """Compute the DBC feature vector of one image file."""
    img = read_image(path)
    prepared = preprocess(img, size=config.image_size)
    subbands = dwt.haar_dwt2(prepared.pixels)
    return dbc.extract_features(subbands.ll, d=config.dbc_distance,
                                cell_size=config.cell_size)


def enroll_gallery(entries, config: PipelineConfig = DEFAULT_CONFIG,
                   on_error: str = "raise") -> tuple:
    """Extract features for (subject_id, path) pairs and build a Gallery.

    ``on_error`` is either "raise" (first failure propagates) or "skip"
    (failures are collected and reported alongside the gallery).  Returns
    (gallery, skipped) where skipped is a list of (path, message) pairs.
    """
    if on_error not in ("raise", "skip"):
        raise ValueError(f"on_error must be 'raise' or 'skip', got {on_error!r}")
    records = []
    skipped = []
    for subject_id, path in entries:
        path = Path(path)
        try:
            features = extract_image_features(path, config)
        except DbcfrError as exc:
            if on_error == "raise":
                raise
            skipped.append((path, str(exc)))
            continue
        records.append((subject_id, path.name, features))
    return Gallery(records), skipped
