from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# The compiled kernels are an optional speedup; the package falls back to the
# numpy implementation when the extension is missing.
extensions = [
    Extension(
        "qharm._kernels._ckernels",
        ["src/qharm/_kernels/_ckernels.pyx"],
        extra_compile_args=["-O3"],
        optional=True,
    )
]

setup(ext_modules=cythonize(extensions, language_level=3) if cythonize else [])
