"""Builds the optional compiled solver kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), but the compiled kernel is 1-2 orders of magnitude faster
on the simplex/branch-and-bound hot loops.
"""

import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "moscal._core._speedups",
        ["src/moscal/_core/_speedups.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        language_level=3,
        compiler_directives={"boundscheck": False, "wraparound": False, "cdivision": True},
    )
)
