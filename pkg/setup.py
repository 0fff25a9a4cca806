import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "quadpair._kernels._core",
                ["src/quadpair/_kernels/_core.pyx"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # no Cython / no compiler: pure-python kernels still work
    sys.stderr.write(f"quadpair: building without compiled kernels ({exc})\n")

setup(ext_modules=ext_modules)
