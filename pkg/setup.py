from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # build without the compiled kernel; grid.py falls back
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("jacbound._grid", ["src/jacbound/_grid.pyx"])],
        compiler_directives={"language_level": 3},
    )

setup(ext_modules=ext_modules)
