"""Build script: compiles the optional Cython accelerator.

The package is fully functional without the extension (a NumPy fallback is
selected at import time), so any failure here downgrades to a warning and
the build proceeds pure-Python. Set MANYBODY_NO_EXTENSION=1 to skip the
compile step entirely.
"""

import os
import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, broken toolchain, ...
            warnings.warn(f"skipping compiled kernels, using pure-Python fallback: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"could not compile {ext.name}, using pure-Python fallback: {exc}")


def extensions():
    if os.environ.get("MANYBODY_NO_EXTENSION"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "manybody.kernels._native",
        ["src/manybody/kernels/_native.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
