import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
    USE_CYTHON = True
except ImportError:
    USE_CYTHON = False

extensions = []
if USE_CYTHON and not os.environ.get("FFCHAINS_NO_EXT"):
    extensions = cythonize(
        [
            Extension(
                "ffchains._ckernels",
                ["src/ffchains/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=extensions)
