from setuptools import Extension, setup
from Cython.Build import cythonize

setup(
    ext_modules=cythonize(
        [
            Extension(
                "hetsched._native",
                ["src/hetsched/_native.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )
)
