"""Kernel backend selection.

The hot kernels (Haar analysis/synthesis, bilinear resize, directional-code
extraction) exist twice: a Cython extension (``dbcfr._kernels_cy``) and a
numpy fallback (``dbcfr._kernels_py``).  The compiled backend is preferred
when it imports; set ``DBCFR_KERNELS=python`` or ``DBCFR_KERNELS=cython`` to
force one explicitly.
"""

import os

from . import _kernels_py

_CHOICES = ("auto", "cython", "python")


def _load(requested: str):
    if requested not in _CHOICES:
        raise ValueError(f"DBCFR_KERNELS must be one of {_CHOICES}, got {requested!r}")
    if requested == "python":
        return _kernels_py
    try:
        from . import _kernels_cy

        return _kernels_cy
    except ImportError:
        if requested == "cython":
            raise ImportError(
                "DBCFR_KERNELS=cython but the compiled extension is not built; "
                "reinstall the package or use DBCFR_KERNELS=python"
            ) from None
        return _kernels_py


def available_backends() -> dict:
    """Importable kernel modules keyed by backend name (for tests/benchmarks)."""
    found = {"python": _kernels_py}
    try:
        from . import _kernels_cy

        found["cython"] = _kernels_cy
    except ImportError:
        pass
    return found


_impl = _load(os.environ.get("DBCFR_KERNELS", "auto").strip().lower() or "auto")

BACKEND = _impl.BACKEND_NAME
haar_dwt2 = _impl.haar_dwt2
haar_idwt2 = _impl.haar_idwt2
resize_bilinear = _impl.resize_bilinear
dbc_features = _impl.dbc_features
