import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("CKACLOSE_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("ckaclose._csubsume", ["src/ckaclose/_csubsume.pyx"], extra_compile_args=["-O3"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
