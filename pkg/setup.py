from setuptools import Extension, setup

# The compiled axis-sum core is optional: the package falls back to the pure
# NumPy implementation in skop._sumcore_py when the extension is unavailable.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "skop._sumcore",
                ["src/skop/_sumcore.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
