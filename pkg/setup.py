"""Build script for the optional compiled kernels.

The package works without the extension; ``so3ft._backend`` falls back to
the NumPy kernels when ``so3ft._kernels`` cannot be imported.
"""
import os
import sys

from setuptools import setup

ext_modules = []
if os.environ.get("SO3FT_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        print("Cython/numpy unavailable, building pure-Python package", file=sys.stderr)
    else:
        openmp = [] if sys.platform == "darwin" else ["-fopenmp"]
        ext_modules = cythonize(
            [
                Extension(
                    "so3ft._kernels",
                    ["src/so3ft/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"] + openmp,
                    extra_link_args=openmp,
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
