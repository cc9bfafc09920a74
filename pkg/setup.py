"""Build script for the optional compiled kernels.

The package is pure Python except for ``iitkit._kernels._compiled``, a small
Cython module holding the sequential chain loops that dominate experiment
runtime.  The extension is marked optional: if it fails to build, the install
still succeeds and the package falls back to the pure-Python kernels.
"""
from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "iitkit._kernels._compiled",
                sources=["src/iitkit/_kernels/_compiled.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
