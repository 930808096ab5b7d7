"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the numpy
fallback. Set ``GFW_OPT_KERNELS=python`` to force the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("GFW_OPT_KERNELS", "").lower() != "python":
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py

pivot = _impl.pivot
bcm_sweep_dense = _impl.bcm_sweep_dense
bcm_sweep_csr = _impl.bcm_sweep_csr
bland_run = _impl.bland_run


def get_backend(name=None):
    """Return the kernel module for ``name`` ("cython" or "python"), default active."""
    if name is None:
        return _impl
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown kernel backend {name!r}")
