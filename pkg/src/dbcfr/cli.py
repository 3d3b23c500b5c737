"""Command-line front end: synth, enroll, identify, evaluate.

Every flag may also be supplied through ``--config FILE``, a flat
``key=value`` text file (keys match the flag names, dashes or underscores);
explicit flags override config values, which override built-in defaults.

Exit codes: 0 = success / probe accepted, 1 = probe rejected,
2 = usage or processing error.
"""

import argparse
import math
import sys
from pathlib import Path

from . import dbc, dwt
from .dataset import (
    MANIFEST_NAME,
    load_manifest,
    make_split,
    read_manifest,
    synth_dataset,
)
from .errors import ConfigError, DbcfrError, EvalError, GalleryError
from .evaluation import ProbeSet, sweep, write_plot_data, write_report_csv
from .image import GrayImage, read_image, rescale_to_byte, write_image
from .matcher import Gallery, identify
from .pipeline import enroll_gallery, extract_image_features
from .preprocess import preprocess

_BOOL_WORDS = {
    "1": True, "true": True, "yes": True, "on": True,
    "0": False, "false": False, "no": False, "off": False,
}


def _parse_bool(text):
    if isinstance(text, bool):
        return text
    try:
        return _BOOL_WORDS[str(text).strip().lower()]
    except KeyError:
        raise ConfigError(f"not a boolean: {text!r}") from None


# converters for settings that may arrive as strings from a config file
_SETTING_TYPES = {
    "seed": int,
    "subjects": int,
    "images": int,
    "noise": float,
    "format": str,
    "gallery_per_subject": int,
    "enrolled": int,
    "strict": _parse_bool,
    "threshold": float,
    "grid_start": float,
    "grid_stop": float,
    "grid_step": float,
    "out": str,
    "plot_data": str,
    "dump_subbands": str,
}


def _load_config(path) -> dict:
    """Parse a flat key=value settings file ('#' starts a comment line)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key = key.strip().replace("-", "_")
        if key not in _SETTING_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown setting {key!r}")
        values[key] = value.strip()
    return values


def _resolve(args, defaults: dict) -> dict:
    """Merge defaults <- config file <- explicit flags for one subcommand."""
    settings = dict(defaults)
    config_path = getattr(args, "config", None)
    if config_path is not None:
        for key, raw in _load_config(config_path).items():
            if key in defaults:
                try:
                    settings[key] = _SETTING_TYPES[key](raw)
                except ValueError as exc:
                    raise ConfigError(f"bad value for {key!r}: {raw!r}") from exc
    for key, value in vars(args).items():
        if key in defaults:
            settings[key] = value
    return settings


def _require(settings: dict, key: str, command: str):
    if settings.get(key) is None:
        raise ConfigError(f"{command} requires --{key.replace('_', '-')}")
    return settings[key]


def _load_dataset(data):
    """Accept a manifest file, a directory with manifest.json, or a raw tree."""
    data = Path(data)
    if data.is_file():
        return read_manifest(data)
    manifest_path = data / MANIFEST_NAME
    if manifest_path.is_file():
        return read_manifest(manifest_path)
    return load_manifest(data)


def threshold_grid(start: float, stop: float, step: float) -> list:
    """Count-based grid start, start+step, ... covering [start, stop]."""
    if step <= 0:
        raise ConfigError(f"grid step must be positive, got {step}")
    if stop < start:
        raise ConfigError(f"grid stop {stop} is below grid start {start}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    grid = [round(start + i * step, 12) for i in range(count)]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError(f"grid step {step} too small to resolve distinct thresholds")
    return grid


_SYNTH_DEFAULTS = {
    "out": None, "seed": 1, "subjects": 10, "images": 14,
    "noise": 0.1, "format": "png",
}


def cmd_synth(args) -> int:
    s = _resolve(args, _SYNTH_DEFAULTS)
    out = _require(s, "out", "synth")
    if s["subjects"] < 1:
        raise ConfigError(f"--subjects must be positive, got {s['subjects']}")
    if s["images"] < 1:
        raise ConfigError(f"--images must be positive, got {s['images']}")
    if not 0.0 <= s["noise"] <= 1.0:
        raise ConfigError(f"--noise must be in [0, 1], got {s['noise']}")
    if s["format"] not in ("png", "pgm"):
        raise ConfigError(f"--format must be png or pgm, got {s['format']!r}")
    manifest = synth_dataset(out, seed=s["seed"], n_subjects=s["subjects"],
                             images_per_subject=s["images"], noise_level=s["noise"],
                             image_format=s["format"])
    print(f"wrote {manifest.image_count} images for {len(manifest.subjects)} "
          f"subjects under {out}")
    return 0


_ENROLL_DEFAULTS = {
    "out": None, "gallery_per_subject": 13, "enrolled": None, "strict": False,
}


def cmd_enroll(args) -> int:
    s = _resolve(args, _ENROLL_DEFAULTS)
    out = _require(s, "out", "enroll")
    manifest = _load_dataset(args.data)
    enrolled = s["enrolled"] if s["enrolled"] is not None else len(manifest.subjects)
    split = make_split(manifest, enrolled_count=enrolled,
                       gallery_per_subject=s["gallery_per_subject"])
    gallery, skipped = enroll_gallery(split.gallery, on_error="skip")
    for path, message in skipped:
        print(f"skipped {path}: {message}", file=sys.stderr)
    if skipped and s["strict"]:
        print(f"error: {len(skipped)} gallery images failed under --strict",
              file=sys.stderr)
        return 2
    if len(gallery) == 0:
        raise GalleryError("no gallery images could be enrolled")
    gallery.save(out)
    print(f"enrolled {len(gallery)} images from {enrolled} subjects -> {out}")
    return 0


_IDENTIFY_DEFAULTS = {"threshold": 0.6, "dump_subbands": None}


def cmd_identify(args) -> int:
    s = _resolve(args, _IDENTIFY_DEFAULTS)
    gallery = Gallery.load(args.gallery)
    if s["dump_subbands"] is not None:
        features = _extract_with_dump(args.probe, Path(s["dump_subbands"]))
    else:
        features = extract_image_features(args.probe)
    result = identify(features, gallery, threshold=s["threshold"])
    print(f"best match: {result.best_subject} (image {result.best_image})")
    print(f"distance: {result.distance:.6f}")
    decision = "accept" if result.accepted else "reject"
    print(f"decision: {decision} (threshold {s['threshold']})")
    return 0 if result.accepted else 1


def _extract_with_dump(probe_path, dump_dir: Path):
    """Feature extraction that also writes the four subbands as PGM dumps."""
    img = read_image(probe_path)
    prepared = preprocess(img)
    subbands = dwt.haar_dwt2(prepared.pixels)
    try:
        dump_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create dump directory {dump_dir}: {exc}") from exc
    for name in ("ll", "lh", "hl", "hh"):
        band = getattr(subbands, name)
        write_image(GrayImage(rescale_to_byte(band)), dump_dir / f"{name}.pgm")
    return dbc.extract_features(subbands.ll)


_EVALUATE_DEFAULTS = {
    "out": None, "gallery_per_subject": 13, "enrolled": None,
    "grid_start": 0.0, "grid_stop": 1.2, "grid_step": 0.05, "plot_data": None,
}


def cmd_evaluate(args) -> int:
    s = _resolve(args, _EVALUATE_DEFAULTS)
    out = _require(s, "out", "evaluate")
    thresholds = threshold_grid(s["grid_start"], s["grid_stop"], s["grid_step"])
    manifest = _load_dataset(args.data)
    enrolled = s["enrolled"] if s["enrolled"] is not None else len(manifest.subjects)
    split = make_split(manifest, enrolled_count=enrolled,
                       gallery_per_subject=s["gallery_per_subject"])
    gallery, _ = enroll_gallery(split.gallery)
    genuine = [(sid, extract_image_features(p)) for sid, p in split.genuine_probes]
    impostor = [(sid, extract_image_features(p)) for sid, p in split.impostor_probes]
    try:
        report = sweep(ProbeSet(genuine=genuine, impostor=impostor), gallery, thresholds)
    except EvalError as exc:
        raise EvalError(
            f"{exc} (degenerate split: check --enrolled and --gallery-per-subject "
            f"against the dataset's subject and image counts)"
        ) from exc
    write_report_csv(report, out)
    if s["plot_data"] is not None:
        write_plot_data(report, s["plot_data"])
    n_genuine, n_impostor, n_gallery = report.counts
    print(f"gallery: {n_gallery} entries; probes: {n_genuine} genuine, "
          f"{n_impostor} impostor")
    if report.eer is None:
        print("eer: undefined (FRR and FAR do not cross within the grid)")
    else:
        print(f"eer: {report.eer:.6f} at threshold {report.eer_threshold:.6f}")
    print(f"report: {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dbcfr",
        description="DBC face identification: Haar-DWT + directional binary "
                    "codes + nearest-neighbor matching.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sup = argparse.SUPPRESS

    p = sub.add_parser("synth", help="generate a deterministic synthetic dataset")
    p.add_argument("--out", default=sup, help="output dataset directory")
    p.add_argument("--seed", type=int, default=sup, help="master RNG seed (default 1)")
    p.add_argument("--subjects", type=int, default=sup,
                   help="number of subjects (default 10)")
    p.add_argument("--images", type=int, default=sup,
                   help="images per subject (default 14)")
    p.add_argument("--noise", type=float, default=sup,
                   help="perturbation level in [0, 1] (default 0.1)")
    p.add_argument("--format", default=sup, choices=("png", "pgm"),
                   help="image file format (default png)")
    p.add_argument("--config", default=sup, help="key=value settings file")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("enroll", help="extract features and write a gallery file")
    p.add_argument("data", help="dataset directory or manifest file")
    p.add_argument("--out", default=sup, help="gallery file to write")
    p.add_argument("--gallery-per-subject", type=int, default=sup,
                   help="gallery images per enrolled subject (default 13)")
    p.add_argument("--enrolled", type=int, default=sup,
                   help="number of enrolled subjects (default: all)")
    p.add_argument("--strict", action="store_true", default=sup,
                   help="fail if any gallery image cannot be processed")
    p.add_argument("--config", default=sup, help="key=value settings file")
    p.set_defaults(func=cmd_enroll)

    p = sub.add_parser("identify", help="match one probe image against a gallery")
    p.add_argument("gallery", help="gallery file written by enroll")
    p.add_argument("probe", help="probe image (PNG or PGM)")
    p.add_argument("--threshold", type=float, default=sup,
                   help="acceptance threshold (default 0.6)")
    p.add_argument("--dump-subbands", default=sup, metavar="DIR",
                   help="write the four DWT subbands as PGM files for debugging")
    p.add_argument("--config", default=sup, help="key=value settings file")
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("evaluate", help="threshold sweep: FRR/FAR/RR report and EER")
    p.add_argument("data", help="dataset directory or manifest file")
    p.add_argument("--out", default=sup, help="report CSV to write")
    p.add_argument("--gallery-per-subject", type=int, default=sup,
                   help="gallery images per enrolled subject (default 13)")
    p.add_argument("--enrolled", type=int, default=sup,
                   help="number of enrolled subjects (default: all)")
    p.add_argument("--grid-start", type=float, default=sup,
                   help="first threshold (default 0)")
    p.add_argument("--grid-stop", type=float, default=sup,
                   help="last threshold (default 1.2)")
    p.add_argument("--grid-step", type=float, default=sup,
                   help="threshold spacing (default 0.05)")
    p.add_argument("--plot-data", default=sup, metavar="DIR",
                   help="also write two-column plot files per curve")
    p.add_argument("--config", default=sup, help="key=value settings file")
    p.set_defaults(func=cmd_evaluate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DbcfrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
