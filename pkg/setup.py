"""Build script: compiles the Cython kernels when Cython and a C compiler are
available, otherwise installs the pure-Python package only."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("PRIME_BORCHERDS_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("prime_borcherds._kernels", ["src/prime_borcherds/_kernels.pyx"],
                       extra_compile_args=["-O2"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
