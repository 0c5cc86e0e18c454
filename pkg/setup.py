"""Build hook for the optional compiled kernels.

The extension is marked optional: if Cython or a C compiler is missing the
package still installs and ``sc2tc.kernels`` falls back to pure Python.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover - exercised only without Cython
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("sc2tc._editdist", ["src/sc2tc/_editdist.pyx"], optional=True)],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
