"""Build the optional Cython kernels.

If Cython or a C compiler is unavailable the package still installs and
falls back to the numpy implementation in ``superdiscord._fallback``.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("SUPERDISCORD_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        DIRECTIVES = {
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        }
        ext_modules = cythonize(
            [
                Extension(
                    "superdiscord._kernels",
                    ["src/superdiscord/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O2"],
                )
            ],
            compiler_directives=DIRECTIVES,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
