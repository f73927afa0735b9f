import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("H5GEO_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "h5geo._core._kernels_cy",
                    ["src/h5geo/_core/_kernels_cy.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        # pure-Python fallback is selected at import time
        ext_modules = []

setup(ext_modules=ext_modules)
