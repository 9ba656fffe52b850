"""Build script for the optional compiled search kernel.

The package works without the extension (a pure-Python kernel is selected
at import time); building it just makes the optimizer fast enough for
large sweeps and the brute-force oracle.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = []
if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "splitchip.optimize._kernel",
                ["src/splitchip/optimize/_kernel.pyx"],
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=extensions)
