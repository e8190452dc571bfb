"""Build script for the optional compiled mixing kernels.

The package works without the extension (a numpy fallback is selected at
import time), so the extension is marked optional: a failed compile degrades
to the fallback instead of breaking the install.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "tsmix._kernels._phase_cy",
                ["src/tsmix/_kernels/_phase_cy.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
