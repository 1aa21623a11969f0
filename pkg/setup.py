"""Build script: compiles the optional Cython kernel extension.

The extension is a performance accelerator only; if Cython or a C compiler
is unavailable the package installs pure-Python and selects the NumPy
fallback kernels at import time.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("IT2FCM_NO_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "it2fcm._ckernels",
                    ["src/it2fcm/_ckernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
