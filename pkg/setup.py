from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:
    # no compiled backend; the package falls back to the numpy kernels
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "dbcfr._kernels_cy",
                sources=["src/dbcfr/_kernels_cy.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                # -ffp-contract=off keeps results bit-identical to the numpy backend
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
