"""Backend selection and cross-backend bit equality of the hot kernels."""

import os
import subprocess
import sys

import numpy as np
import pytest

from dbcfr import kernels
from dbcfr.kernels import available_backends

_backends = available_backends()
needs_cython = pytest.mark.skipif(
    "cython" not in _backends, reason="compiled extension not built"
)


def test_python_backend_always_available():
    assert "python" in _backends
    assert _backends["python"].BACKEND_NAME == "python"
    assert kernels.BACKEND in _backends


@needs_cython
def test_backends_agree_bit_for_bit():
    py = _backends["python"]
    cy = _backends["cython"]
    rng = np.random.default_rng(61)
    for _ in range(20):
        x = rng.uniform(0.0, 255.0, (100, 100))
        got = [np.asarray(b) for b in cy.haar_dwt2(x)]
        want = py.haar_dwt2(x)
        for g, w in zip(got, want):
            np.testing.assert_array_equal(g, w)
        np.testing.assert_array_equal(
            np.asarray(cy.haar_idwt2(*got)), py.haar_idwt2(*want)
        )

        img = rng.uniform(0.0, 255.0, (int(rng.integers(40, 200)),
                                       int(rng.integers(40, 200))))
        np.testing.assert_array_equal(
            np.asarray(cy.resize_bilinear(img, 100, 100)),
            py.resize_bilinear(img, 100, 100),
        )

        band = rng.uniform(0.0, 400.0, (50, 50))
        np.testing.assert_array_equal(
            np.asarray(cy.dbc_features(band, 5, 1)), py.dbc_features(band, 5, 1)
        )


def _backend_in_subprocess(value):
    env = dict(os.environ)
    if value is None:
        env.pop("DBCFR_KERNELS", None)
    else:
        env["DBCFR_KERNELS"] = value
    return subprocess.run(
        [sys.executable, "-c", "import dbcfr; print(dbcfr.BACKEND)"],
        capture_output=True, text=True, env=env,
    )


def test_env_var_selects_python_backend():
    proc = _backend_in_subprocess("python")
    assert proc.returncode == 0
    assert proc.stdout.strip() == "python"


@needs_cython
def test_env_var_selects_cython_backend():
    proc = _backend_in_subprocess("cython")
    assert proc.returncode == 0
    assert proc.stdout.strip() == "cython"


def test_env_var_auto_and_default():
    for value in (None, "auto"):
        proc = _backend_in_subprocess(value)
        assert proc.returncode == 0
        assert proc.stdout.strip() in ("python", "cython")


def test_env_var_rejects_unknown_backend():
    proc = _backend_in_subprocess("fortran")
    assert proc.returncode != 0
    assert "DBCFR_KERNELS" in proc.stderr
