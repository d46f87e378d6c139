"""Build script for the optional compiled kernel backend.

The compiled extension is a performance twin of combqkd._kernels.pure;
the package falls back to the pure-Python backend when the extension is
missing, so a failed compile only costs speed, not functionality.
"""
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Never let a compiler problem break the install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, etc.
            print(f"warning: compiled kernels skipped ({exc}); "
                  "pure-Python backend will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "pure-Python backend will be used")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "combqkd._kernels._fast",
        ["src/combqkd/_kernels/_fast.pyx"],
        # -ffp-contract=off keeps results bit-aligned with the pure backend
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
