"""Build script: compiles the integer-polynomial kernel if Cython + a C compiler
are available, and falls back to the pure-Python kernel otherwise (the package
selects whichever is importable at runtime)."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "qonsager._cykernel",
                ["src/qonsager/_cykernel.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
