"""Build script for the optional compiled kernel extension.

The package works without the extension (a pure numpy fallback is selected
at import time), so any failure to build it, or SEQMEAS_SKIP_EXT=1 in the
environment, degrades to a pure-Python install instead of aborting.
"""

import os

from setuptools import Extension, setup


def extension_modules():
    if os.environ.get("SEQMEAS_SKIP_EXT", "") == "1":
        return []
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "seqmeas._core",
        sources=["src/seqmeas/_core.pyx"],
        include_dirs=[numpy.get_include()],
    )
    return cythonize([ext], language_level=3)


def build():
    try:
        ext = extension_modules()
    except Exception:
        ext = []
    kwargs = {"ext_modules": ext} if ext else {}
    setup(**kwargs)


build()
