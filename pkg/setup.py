import platform
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extra_compile_args = ["-O2"]
if platform.machine().lower() in ("x86_64", "amd64"):
    # Opt into the POPCNT instruction; the C fallback in _kernel.pyx covers
    # compilers/targets without it.
    extra_compile_args.append("-mpopcnt")

extensions = [
    Extension(
        "optmap.indexmap._kernel",
        ["src/optmap/indexmap/_kernel.pyx"],
        language="c++",
        extra_compile_args=extra_compile_args,
    )
]


class optional_build_ext(build_ext):
    """Build the compiled kernel if possible; the package falls back to the
    pure-Python implementation at import time when the extension is missing."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing entirely
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            f"WARNING: building the compiled index-map kernel failed ({exc}); "
            "installing with the pure-Python fallback only.",
            file=sys.stderr,
        )


setup(
    ext_modules=cythonize(extensions, language_level="3") if cythonize else [],
    cmdclass={"build_ext": optional_build_ext},
)
