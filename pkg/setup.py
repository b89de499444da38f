"""Build script for the optional compiled integer kernel.

The package is fully functional without the extension; if Cython or a C
compiler is unavailable the install proceeds and the pure-Python kernel
answers at runtime.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing entirely
            _skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            _skip(exc)


def _skip(exc):
    print(f"warning: compiled kernel skipped ({exc}); pure-Python fallback will be used")


def extensions():
    if os.environ.get("D2KIT_NO_EXTENSION"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [
            Extension(
                "d2kit._intcore",
                ["src/d2kit/_intcore.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        language_level=3,
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
