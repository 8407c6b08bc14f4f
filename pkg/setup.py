"""Build script: compiles the optional term-arithmetic extension.

The extension is a pure speed layer; the package falls back to the Python
implementation in ``poiskit._kernel._termops_py`` when the build is skipped
(``POISKIT_NO_EXT=1``) or fails on the host toolchain.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("POISKIT_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/poiskit/_kernel/_termops_cy.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except Exception as exc:  # noqa: BLE001 - any build problem means "no extension"
        print(f"poiskit: skipping compiled kernel ({exc})")

setup(ext_modules=ext_modules)
