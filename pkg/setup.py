"""Builds the optional compiled reduction kernel.

The package is fully functional without it; blowstar.kernel falls back to
the pure-Python twin when the extension is absent.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "blowstar._kernel_c",
                ["src/blowstar/_kernel_c.pyx"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
