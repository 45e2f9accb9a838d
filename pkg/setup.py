"""Build script: compiles the enumeration kernel when Cython and a C compiler
are available.  The package works without the extension (a pure-Python kernel
is selected at import time), so extension build failures are non-fatal."""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "gkplat._enum_cy",
                ["src/gkplat/_enum_cy.pyx"],
                extra_compile_args=["-O3"],
                include_dirs=[numpy.get_include()],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
