from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/recmatch/assign/_kernel.pyx"],
        language_level="3",
    )
except ImportError:
    # No Cython available: install pure Python only; recmatch.assign falls
    # back to the numpy kernel at import time.
    ext_modules = None

setup(ext_modules=ext_modules)
