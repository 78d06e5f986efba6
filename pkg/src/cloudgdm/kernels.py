"""Backend selection for the hot kernels.

The compiled extension ``cloudgdm._kernels`` is used when it was built and
imports cleanly; otherwise the numpy implementations in ``_kernels_py``
are used. Setting ``CLOUDGDM_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("CLOUDGDM_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

certainty = _impl.certainty
iaa_sweep = _impl.iaa_sweep
simplex_iterate = _impl.simplex_iterate
pivot = _impl.pivot

OPTIMAL = _kernels_py.OPTIMAL
UNBOUNDED = _kernels_py.UNBOUNDED
ITERATION_LIMIT = _kernels_py.ITERATION_LIMIT


def available_backends():
    """Map backend name to kernel module for every importable backend."""
    backends = {"python": _kernels_py}
    try:
        from . import _kernels as _compiled
    except ImportError:
        return backends
    backends["cython"] = _compiled
    return backends
