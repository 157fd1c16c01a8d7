"""Build script: compiles the optional finite-field kernel.

The package is fully functional without the extension; fanostrata.core
falls back to the pure-Python kernel when the compiled module is absent,
so any build failure here only costs speed.
"""

import numpy
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the accelerator if possible, continue without it otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, etc.
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(f"WARNING: building fanostrata._core failed ({exc}); "
              "falling back to the pure-Python kernel")


try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "fanostrata._core",
                ["src/fanostrata/_core.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": optional_build_ext})
