"""Build script: compiles the optional C kernel extension.

Set FBMPROBE_PURE_PYTHON=1 to skip the extension entirely; the package
then runs on the numpy fallback selected at import time.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("FBMPROBE_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "fbmprobe._ckern",
                    sources=["src/fbmprobe/_ckern.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
