import numpy as np
from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:  # build without the compiled core; the pure-Python kernels are used
    ext_modules = []
else:
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("hopspanner._kernels._core", ["src/hopspanner/_kernels/_core.pyx"],
                   include_dirs=[np.get_include()], language="c++",
                   extra_compile_args=["-O3"],
                   define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")])],
        language_level=3,
    )

setup(ext_modules=ext_modules)
