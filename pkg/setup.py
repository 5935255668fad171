"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure-Python twin of the kernels is
selected at import time), so the extension is marked optional and a failed
compile only downgrades performance.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "collargeo.kernels._core",
                ["src/collargeo/kernels/_core.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
