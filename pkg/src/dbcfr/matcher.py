"""Nearest-neighbor identification against an enrolled gallery.

Matching is a plain Euclidean scan over all gallery entries; with at most a
few thousand 100-dimensional vectors an index structure buys nothing.  A
probe is accepted when its best distance is <= the decision threshold, so a
zero threshold accepts only exact duplicates.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dbc import FeatureVector, features_from_text, features_to_text
from .errors import GalleryError, IoError, ShapeError

GALLERY_HEADER = "dbcfr-gallery v1"


@dataclass(frozen=True)
class MatchResult:
    best_subject: str
    best_image: str
    distance: float
    accepted: bool


class Gallery:
    """An immutable, ordered set of (subject_id, image_id, features) records."""

    def __init__(self, entries):
        entries = list(entries)
        seen = set()
        for subject_id, image_id, features in entries:
            key = (subject_id, image_id)
            if key in seen:
                raise GalleryError(f"duplicate gallery entry {key}")
            seen.add(key)
            if not isinstance(features, FeatureVector):
                raise GalleryError(f"entry {key} does not hold a FeatureVector")
        self._entries = entries
        self._matrix = (
            np.stack([fv.coeffs for _, _, fv in entries])
            if entries
            else np.empty((0, 0), dtype=np.float64)
        )

    @property
    def entries(self) -> list:
        return list(self._entries)

    @property
    def feature_matrix(self) -> np.ndarray:
        return self._matrix

    def __len__(self) -> int:
        return len(self._entries)

    def save(self, path) -> None:
        """Write the line-oriented gallery file (UTF-8, LF)."""
        lines = [GALLERY_HEADER]
        for subject_id, image_id, fv in self._entries:
            if "," in subject_id or "," in image_id:
                raise GalleryError(f"ids must not contain commas: {(subject_id, image_id)}")
            lines.append(f"{subject_id},{image_id},{features_to_text(fv)}")
        data = "\n".join(lines) + "\n"
        try:
            Path(path).write_bytes(data.encode("utf-8"))
        except OSError as exc:
            raise IoError(f"cannot write gallery {path}: {exc}") from exc

    @classmethod
    def load(cls, path) -> "Gallery":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise IoError(f"cannot read gallery {path}: {exc}") from exc
        lines = text.splitlines()
        if not lines or lines[0] != GALLERY_HEADER:
            raise GalleryError(f"{path} is not a gallery file (missing '{GALLERY_HEADER}')")
        entries = []
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            try:
                subject_id, image_id, rest = line.split(",", 2)
                fv = features_from_text(rest)
            except (ValueError, ShapeError) as exc:
                raise GalleryError(f"{path}:{lineno}: malformed record: {exc}") from exc
            entries.append((subject_id, image_id, fv))
        return cls(entries)


def euclidean(a, b) -> float:
    """Euclidean distance between two feature vectors."""
    av = a.coeffs if isinstance(a, FeatureVector) else np.asarray(a, dtype=np.float64)
    bv = b.coeffs if isinstance(b, FeatureVector) else np.asarray(b, dtype=np.float64)
    if av.shape != bv.shape:
        raise ShapeError(f"length mismatch: {av.shape} vs {bv.shape}")
    diff = av - bv
    return float(np.sqrt(np.sum(diff * diff)))


def identify(probe: FeatureVector, gallery: Gallery, threshold: float) -> MatchResult:
    """Find the minimum-distance gallery entry for a probe.

    Ties break toward the earliest gallery position.  The probe is accepted
    when the best distance is <= ``threshold``.
    """
    if len(gallery) == 0:
        raise GalleryError("cannot identify against an empty gallery")
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    diffs = gallery.feature_matrix - probe.coeffs
    sq = np.einsum("ij,ij->i", diffs, diffs)
    idx = int(np.argmin(sq))  # first minimum wins
    subject_id, image_id, best_fv = gallery.entries[idx]
    distance = euclidean(probe, best_fv)
    return MatchResult(
        best_subject=subject_id,
        best_image=image_id,
        distance=distance,
        accepted=distance <= threshold,
    )
