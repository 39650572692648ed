import os

from setuptools import setup

ext_modules = []
if not os.environ.get("QTETRA_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("qtetra._speedups", ["src/qtetra/_speedups.pyx"])],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
