from setuptools import Extension, setup
from Cython.Build import cythonize
import numpy as np

ext = Extension(
    "layerpaint._kernels._core",
    ["src/layerpaint/_kernels/_core.pyx"],
    include_dirs=[np.get_include()],
)

setup(
    ext_modules=cythonize(
        ext,
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    ),
)
