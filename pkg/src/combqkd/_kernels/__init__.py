"""Numeric kernel backend selection.

The compiled extension (_fast, Cython) is preferred when importable; the
pure-Python module is the always-available fallback and the reference
for what the formulas are.  Set COMBQKD_PURE_PYTHON=1 to force the
fallback, e.g. to benchmark one backend against the other.
"""
import os

from . import pure

if os.environ.get("COMBQKD_PURE_PYTHON"):
    backend = pure
else:
    try:
        from . import _fast as backend
    except ImportError:
        backend = pure

BACKEND_NAME = "compiled" if backend.COMPILED else "pure"


def available_backends():
    """Names of the importable backends, compiled first when present."""
    names = []
    try:
        from . import _fast  # noqa: F401
        names.append("compiled")
    except ImportError:
        pass
    names.append("pure")
    return names
