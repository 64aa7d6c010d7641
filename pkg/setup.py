"""Build script: compiles the event-engine kernel when Cython is available.

The package works without the compiled extension (a pure-Python kernel is
selected at import time), so a missing compiler or Cython only costs speed.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    # -ffp-contract=off keeps float arithmetic identical to the pure-Python
    # kernel (no fused multiply-add), which the parity tests rely on.
    ext_modules = cythonize(
        [
            "src/apdt/sim/_kernel.pyx",
        ],
        compiler_directives={"language_level": "3"},
    )
    for ext in ext_modules:
        ext.extra_compile_args = ["-O2", "-ffp-contract=off"]
        ext.include_dirs = [numpy.get_include()]
        ext.define_macros = [("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")]
except ImportError:
    pass

setup(ext_modules=ext_modules)
