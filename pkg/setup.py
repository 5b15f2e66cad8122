"""Build script for the optional compiled kernel extension.

The package works without the extension (a numpy reference backend is
selected at import time), so a failed compile only costs speed. Set
QUANTOBS_SKIP_EXT=1 to skip the extension build entirely.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("QUANTOBS_SKIP_EXT", "") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "quantobs._kernels._speedups",
                    ["src/quantobs/_kernels/_speedups.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
