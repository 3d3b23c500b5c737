"""Exception hierarchy shared by all dbcfr modules."""


class DbcfrError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(DbcfrError):
    """Array dimensions violate an operation's contract."""


class IoError(DbcfrError):
    """A file or directory could not be read or written."""


class ManifestError(DbcfrError):
    """A dataset manifest is malformed or references missing data."""


class SplitError(DbcfrError):
    """A gallery/probe split cannot be built from the manifest."""


class CropError(DbcfrError):
    """Cropping failed because the image has no foreground."""


class ThresholdError(DbcfrError):
    """Automatic threshold selection failed (degenerate histogram)."""


class BoundsError(DbcfrError):
    """A neighborhood reference falls outside its cell."""


class GalleryError(DbcfrError):
    """The gallery is empty, inconsistent, or malformed on disk."""


class EvalError(DbcfrError):
    """The evaluation inputs are degenerate (e.g. no probes)."""


class ConfigError(DbcfrError):
    """Pipeline configuration is inconsistent."""
