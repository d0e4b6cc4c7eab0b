"""Build script: compiles the optional Louvain extension when Cython is available.

The package is fully functional without the extension (a pure-Python kernel is
selected at import time); set SEMFLOW_NO_EXT=1 to skip compilation entirely.
"""

import os

from setuptools import Extension, setup


def extensions():
    if os.environ.get("SEMFLOW_NO_EXT") == "1":
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "semflow._louvain_core",
        sources=["src/semflow/_louvain_core.pyx"],
    )
    return cythonize([ext], language_level="3")


setup(ext_modules=extensions())
