"""Build script: compiles the optional accelerator extension.

The package is fully functional without the extension (a pure-Python
numpy backend is selected at import time), so any failure to build it
is downgraded to a warning.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Treat extension build failures as non-fatal."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            f"WARNING: building the minleak._kernel accelerator failed ({exc}); "
            "falling back to the pure-Python backend.",
            file=sys.stderr,
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print(
            "WARNING: Cython not available; skipping the accelerator extension.",
            file=sys.stderr,
        )
        return []
    ext = Extension("minleak._kernel", ["src/minleak/_kernel.pyx"])
    return cythonize(ext, language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
