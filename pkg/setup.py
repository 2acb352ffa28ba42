"""Builds the optional compiled codec kernel.

The package is fully functional without it (rfgate.protocol falls back to
the pure-Python kernel at import time), so the extension is marked optional
and a failed compile does not fail the install.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "rfgate.protocol._native",
                ["src/rfgate/protocol/_native.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
