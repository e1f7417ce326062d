from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "phasebell._kernels._fast",
                ["src/phasebell/_kernels/_fast.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # Pure-Python install still works; the package falls back to the
    # interpreted kernels at import time.
    extensions = []

setup(ext_modules=extensions)
