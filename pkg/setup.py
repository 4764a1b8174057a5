"""Build script for the optional compiled kernels.

The package is fully functional without the extension (a pure-numpy
fallback is selected at import time); when Cython is available the
extension is built with FMA contraction disabled so both backends produce
bit-identical results.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "ratner_decay._kernels._core",
                ["src/ratner_decay/_kernels/_core.pyx"],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
