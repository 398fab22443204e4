"""Build script for the optional compiled kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so any failure while cythonizing or compiling downgrades to
a pure-Python install instead of aborting.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


def _extensions():
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        print("qpoisson: Cython not available, skipping compiled kernels", file=sys.stderr)
        return []
    ext = Extension(
        "qpoisson._kernels",
        ["src/qpoisson/_kernels.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


class optional_build_ext(build_ext):
    """build_ext that downgrades compiler failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"qpoisson: compiled kernels skipped ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"qpoisson: compiled kernels skipped ({exc})", file=sys.stderr)


setup(ext_modules=_extensions(), cmdclass={"build_ext": optional_build_ext})
