"""Build script. The comparator kernels ship as an optional Cython extension;
when no compiler (or Cython) is available the install falls back to the pure
Python twin in depthreat.semver._kernel_py with identical behavior.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/depthreat/semver/_kernel_cy.pyx"],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
