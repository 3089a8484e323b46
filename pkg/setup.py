from setuptools import Extension, setup

# The compiled kernel is optional: when Cython (or a compiler) is missing the
# package falls back to the numpy implementation at import time.
try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "specmix._kernels._vhcore",
                ["src/specmix/_kernels/_vhcore.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level="3",
    )

setup(ext_modules=ext_modules)
