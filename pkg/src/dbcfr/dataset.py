"""Dataset manifests, gallery/probe splits, and deterministic synthetic data.

The on-disk layout is subject-per-directory: each subdirectory of the dataset
root is one subject, with its image files in lexicographic order.  A split
takes the first ``gallery_per_subject`` images of each enrolled subject as
gallery entries and the next image as that subject's genuine probe; the first
image of every remaining subject becomes an impostor probe.  Enrollment
follows manifest order (first ``enrolled_count`` subjects).

The synthetic generator stands in for a real face database at desk scale:
each subject is a bright elliptical region on a dark background carrying a
subject-specific texture (two oriented gratings plus a handful of blobs);
images of one subject differ by a seeded sub-pixel translation and additive
noise, both scaled by ``noise_level``.  Identical parameters give
bit-identical files.
"""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import IoError, ManifestError, SplitError
from .image import GrayImage, write_image

IMAGE_SUFFIXES = (".png", ".pgm")

MANIFEST_NAME = "manifest.json"

SYNTH_CANVAS = 256  # synthetic images are square with this side


@dataclass
class SubjectRecord:
    subject_id: str
    image_paths: list
    enrolled: bool = True

    def __post_init__(self):
        if not self.subject_id:
            raise ManifestError("subject id must be non-empty")
        if not self.image_paths:
            raise ManifestError(f"subject {self.subject_id!r} has no images")
        if self.enrolled and len(self.image_paths) < 2:
            # an enrolled subject needs at least one gallery image and one probe
            self.enrolled = False


@dataclass
class DatasetManifest:
    subjects: list = field(default_factory=list)
    source_root: Path = Path(".")

    def __post_init__(self):
        ids = [s.subject_id for s in self.subjects]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ManifestError(f"duplicate subject ids: {dupes}")

    @property
    def image_count(self) -> int:
        return sum(len(s.image_paths) for s in self.subjects)


@dataclass(frozen=True)
class Split:
    """Disjoint gallery, genuine-probe, and impostor-probe image lists."""

    gallery: list  # (subject_id, Path)
    genuine_probes: list
    impostor_probes: list


def load_manifest(root, layout: str = "subject-per-directory") -> DatasetManifest:
    """Build a manifest by scanning a subject-per-directory tree."""
    if layout != "subject-per-directory":
        raise ManifestError(f"unknown layout {layout!r}")
    root = Path(root)
    if not root.is_dir():
        raise IoError(f"dataset root does not exist: {root}")
    subjects = []
    for subdir in sorted(p for p in root.iterdir() if p.is_dir()):
        images = sorted(
            p for p in subdir.iterdir()
            if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES
        )
        if not images:
            raise ManifestError(f"subject directory {subdir.name!r} contains no images")
        subjects.append(SubjectRecord(subject_id=subdir.name, image_paths=images))
    if not subjects:
        raise ManifestError("no subjects")
    return DatasetManifest(subjects=subjects, source_root=root)


def write_manifest(manifest: DatasetManifest, path) -> None:
    """Serialize a manifest as JSON with image paths relative to the file."""
    import json
    import os

    path = Path(path)
    doc = {
        "subjects": [
            {
                "id": s.subject_id,
                "images": [
                    os.path.relpath(p, path.parent).replace(os.sep, "/")
                    for p in s.image_paths
                ],
                "enrolled": s.enrolled,
            }
            for s in manifest.subjects
        ]
    }
    try:
        path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write manifest {path}: {exc}") from exc


def read_manifest(path) -> DatasetManifest:
    """Load a JSON manifest, validating that every referenced image exists."""
    import json

    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ManifestError(f"malformed manifest {path}: {exc}") from exc
    if not isinstance(doc, dict) or "subjects" not in doc:
        raise ManifestError(f"manifest {path} lacks a 'subjects' field")
    root = path.parent
    subjects = []
    for entry in doc["subjects"]:
        try:
            subject_id = entry["id"]
            images = [root / img for img in entry["images"]]
            enrolled = bool(entry.get("enrolled", True))
        except (TypeError, KeyError) as exc:
            raise ManifestError(f"malformed subject entry in {path}: {exc}") from exc
        for img in images:
            if not img.is_file():
                raise ManifestError(f"manifest {path} references missing image {img}")
        subjects.append(SubjectRecord(subject_id=subject_id, image_paths=images, enrolled=enrolled))
    if not subjects:
        raise ManifestError("no subjects")
    return DatasetManifest(subjects=subjects, source_root=root)


def make_split(manifest: DatasetManifest, enrolled_count: int, gallery_per_subject: int) -> Split:
    """Deterministic gallery/probe split following manifest order.

    The first ``enrolled_count`` subjects enroll their first
    ``gallery_per_subject`` images and probe with the next one; every other
    subject contributes its first image as an impostor probe.
    """
    if enrolled_count < 1:
        raise SplitError(f"enrolled_count must be positive, got {enrolled_count}")
    if gallery_per_subject < 1:
        raise SplitError(f"gallery_per_subject must be positive, got {gallery_per_subject}")
    if enrolled_count > len(manifest.subjects):
        raise SplitError(
            f"enrolled_count {enrolled_count} exceeds subject count {len(manifest.subjects)}"
        )
    gallery, genuine, impostor = [], [], []
    for subject in manifest.subjects[:enrolled_count]:
        if len(subject.image_paths) < gallery_per_subject + 1:
            raise SplitError(
                f"subject {subject.subject_id!r} has {len(subject.image_paths)} images, "
                f"needs {gallery_per_subject + 1} to enroll"
            )
        for p in subject.image_paths[:gallery_per_subject]:
            gallery.append((subject.subject_id, p))
        genuine.append((subject.subject_id, subject.image_paths[gallery_per_subject]))
    for subject in manifest.subjects[enrolled_count:]:
        impostor.append((subject.subject_id, subject.image_paths[0]))
    return Split(gallery=gallery, genuine_probes=genuine, impostor_probes=impostor)


# Geometry and large-scale features shared by every synthetic subject: a
# bright ellipse with radial falloff, two dark "eye" blobs, a bright nose
# ridge, a dark mouth, and two fixed gratings.  The shared structure makes
# different subjects agree on most coarse derivative signs, which keeps
# inter-subject feature distances in the range a real face database shows;
# identity lives in the subject-specific texture rendered on top.
_FACE = {
    "cy": 128.0, "cx": 128.0, "ry": 88.0, "rx": 72.0, "base": 150.0,
    "falloff": 28.0,
    "blobs": (
        # (dy/ry, dx/rx, sigma, amplitude)
        (-0.36, -0.40, 13.0, -45.0),
        (-0.36, 0.40, 13.0, -45.0),
        (0.05, 0.0, 12.0, 26.0),
        (0.48, 0.0, 16.0, -40.0),
    ),
    "gratings": (
        # amplitude, orientation, wavelength, phase
        (16.0, 0.35, 68.0, 1.2),
        (12.0, 2.1, 54.0, 4.0),
    ),
}

_PAD = 4  # widest whole-pixel translation the generator applies


def _shared_rough() -> list:
    """Fixed mid-frequency cosine bank layered onto every face.

    Dense skin-like micro-texture with derivatives strong enough that sensor
    noise rarely flips a directional sign.  It is identical across subjects
    and datasets, so it anchors rather than distinguishes.
    """
    rng = np.random.default_rng(np.random.SeedSequence(0xFACE))
    return [
        (
            rng.uniform(4.0, 6.5),
            rng.uniform(0.0, np.pi),
            rng.uniform(7.0, 14.0),
            rng.uniform(0.0, 2.0 * np.pi),
        )
        for _ in range(40)
    ]


_ROUGH = _shared_rough()


def _subject_pattern(rng: np.random.Generator):
    """Draw the parameters of one subject's identity texture.

    Besides a few gratings and blobs, every subject carries a dense bank of
    mid-frequency cosines ("rough"): skin-like micro-texture whose derivative
    dominates sensor noise, the property the directional codes feed on.
    """
    params = {
        "gratings": [
            (
                rng.uniform(8.0, 12.0),            # amplitude
                rng.uniform(0.0, np.pi),           # orientation
                rng.uniform(36.0, 60.0),           # wavelength
                rng.uniform(0.0, 2.0 * np.pi),     # phase
            )
            for _ in range(2)
        ],
        "blobs": [
            (
                rng.uniform(-0.6, 0.6),            # offset from center, fraction of ry
                rng.uniform(-0.6, 0.6),            # fraction of rx
                rng.uniform(9.0, 18.0),            # sigma
                rng.choice([-1.0, 1.0]) * rng.uniform(20.0, 34.0),  # amplitude
            )
            for _ in range(10)
        ],
        "rough": [
            (
                rng.uniform(1.0, 1.8),             # amplitude
                rng.uniform(0.0, np.pi),           # orientation
                rng.uniform(7.0, 14.0),            # wavelength
                rng.uniform(0.0, 2.0 * np.pi),     # phase
            )
            for _ in range(40)
        ],
    }
    return params


def _render_base(params: dict) -> np.ndarray:
    """Evaluate a subject's analytic pattern on a _PAD-padded canvas.

    Texture (shared and subject-specific alike) fades quadratically toward
    the ellipse rim so the boundary stays bright: the scan crop then finds
    the same box in every image of a subject regardless of noise.
    """
    n = SYNTH_CANVAS + 2 * _PAD
    yy, xx = np.meshgrid(np.arange(n, dtype=np.float64), np.arange(n, dtype=np.float64),
                         indexing="ij")
    y = yy - (_FACE["cy"] + _PAD)
    x = xx - (_FACE["cx"] + _PAD)

    rsq = (y / _FACE["ry"]) ** 2 + (x / _FACE["rx"]) ** 2

    texture = np.zeros((n, n), dtype=np.float64)
    gratings = list(_FACE["gratings"]) + _ROUGH + params["gratings"] + params["rough"]
    for amp, theta, wavelength, phase in gratings:
        proj = x * np.cos(theta) + y * np.sin(theta)
        texture += amp * np.sin(2.0 * np.pi * proj / wavelength + phase)
    for fy, fx, sigma, amp in list(_FACE["blobs"]) + params["blobs"]:
        by = y - fy * _FACE["ry"]
        bx = x - fx * _FACE["rx"]
        texture += amp * np.exp(-(by * by + bx * bx) / (2.0 * sigma * sigma))

    img = np.full((n, n), 12.0)
    face = rsq <= 1.0
    envelope = 1.0 - 0.55 * rsq
    values = _FACE["base"] - _FACE["falloff"] * rsq + envelope * texture
    img[face] = values[face]
    return np.clip(img, 0.0, 255.0)


def _shifted_view(base: np.ndarray, dy: int, dx: int) -> np.ndarray:
    """Translate the padded base by whole pixels via slicing (exact)."""
    n = SYNTH_CANVAS
    return base[_PAD - dy : _PAD - dy + n, _PAD - dx : _PAD - dx + n]


def synth_dataset(out_dir, seed: int, n_subjects: int, images_per_subject: int,
                  noise_level: float, image_format: str = "png") -> DatasetManifest:
    """Write a deterministic synthetic dataset and its manifest.

    Each subject gets ``images_per_subject`` files under its own directory;
    image k of a subject is the subject's base pattern shifted by a seeded
    sub-pixel translation and perturbed by seeded additive Gaussian noise,
    both proportional to ``noise_level``.  At noise 0 all images of a subject
    are pixel-identical.
    """
    if n_subjects < 1:
        raise ValueError(f"n_subjects must be positive, got {n_subjects}")
    if images_per_subject < 1:
        raise ValueError(f"images_per_subject must be positive, got {images_per_subject}")
    if not 0.0 <= noise_level <= 1.0:
        raise ValueError(f"noise_level must be in [0, 1], got {noise_level}")
    if image_format not in ("png", "pgm"):
        raise ValueError(f"image_format must be 'png' or 'pgm', got {image_format!r}")
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create output directory {out_dir}: {exc}") from exc

    subjects = []
    for s in range(n_subjects):
        subject_id = f"s{s:03d}"
        subject_dir = out_dir / subject_id
        try:
            subject_dir.mkdir(exist_ok=True)
        except OSError as exc:
            raise IoError(f"cannot create subject directory {subject_dir}: {exc}") from exc
        params = _subject_pattern(np.random.default_rng(np.random.SeedSequence([seed, s])))
        base = _render_base(params)
        paths = []
        for k in range(images_per_subject):
            rng = np.random.default_rng(np.random.SeedSequence([seed, s, k]))
            # whole-pixel translation jitter; the scan crop re-centers it
            dy, dx = (int(v) for v in
                      np.rint(rng.uniform(-1.0, 1.0, size=2) * (4.0 * noise_level)))
            img = _shifted_view(base, dy, dx) + rng.normal(
                0.0, 25.0 * noise_level, size=(SYNTH_CANVAS, SYNTH_CANVAS))
            np.clip(img, 0.0, 255.0, out=img)
            path = subject_dir / f"i{k:02d}.{image_format}"
            write_image(GrayImage(img), path)
            paths.append(path)
        subjects.append(SubjectRecord(subject_id=subject_id, image_paths=paths))

    manifest = DatasetManifest(subjects=subjects, source_root=out_dir)
    write_manifest(manifest, out_dir / MANIFEST_NAME)
    return manifest
