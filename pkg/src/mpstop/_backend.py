"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
kernels. Set ``MPSTOP_PURE_PYTHON=1`` to force the fallback.
"""
import importlib
import os

from . import _kernels_py


def load(name=None):
    """Return a kernel module by name (``"cython"`` or ``"python"``).

    With no name, pick the compiled kernels if available and not disabled.
    Raises ImportError when ``"cython"`` is requested but not built.
    """
    if name == "python":
        return _kernels_py
    if name == "cython":
        return importlib.import_module("mpstop._kernels")
    if name is not None:
        raise ValueError(f"unknown backend {name!r}")
    if os.environ.get("MPSTOP_PURE_PYTHON", "") not in ("", "0"):
        return _kernels_py
    try:
        return importlib.import_module("mpstop._kernels")
    except ImportError:
        return _kernels_py


def available():
    names = ["python"]
    try:
        load("cython")
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names


kernels = load()
