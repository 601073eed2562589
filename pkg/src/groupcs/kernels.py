"""Backend selection for the eigenvalue kernels.

The compiled ``_kernels`` extension is used when it was built; otherwise, or
when ``GROUPCS_PURE_PYTHON=1`` is set, the numpy implementation takes over.
Both expose ``jacobi_eigvalsh`` and ``subset_extreme_eigs`` with identical
signatures.
"""
import importlib
import os

from . import _kernels_py

_compiled = None
if not os.environ.get("GROUPCS_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

_impl = _compiled if _compiled is not None else _kernels_py
BACKEND = "cython" if _compiled is not None else "python"

jacobi_eigvalsh = _impl.jacobi_eigvalsh
subset_extreme_eigs = _impl.subset_extreme_eigs


def available_backends() -> list[str]:
    names = ["python"]
    try:
        importlib.import_module("._kernels", __package__)
        names.insert(0, "cython")
    except ImportError:
        pass
    return names


def get_backend(name: str):
    """Return the kernel module for ``"cython"`` or ``"python"``."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        return importlib.import_module("._kernels", __package__)
    raise ValueError(f"unknown backend {name!r}")
