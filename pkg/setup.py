"""Build script: compiles the optional geostat kernel extension.

The package is fully functional without the extension; nutriquest.geostat
falls back to the numpy implementation when the compiled module is absent
(or when NUTRIQUEST_PURE=1 is set).
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("NUTRIQUEST_NO_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "nutriquest.geostat._kernels",
                    ["src/nutriquest/geostat/_kernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
