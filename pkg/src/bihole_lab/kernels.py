"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
fallback.  Set ``BIHOLE_LAB_BACKEND=python`` to force the fallback.
"""

import os

from . import _kernels_py

_forced = os.environ.get("BIHOLE_LAB_BACKEND", "").lower()

if _forced == "python":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        if _forced == "compiled":
            raise
        _impl = _kernels_py

BACKEND = _impl.BACKEND
gnnp_csr = _impl.gnnp_csr
coupon_times = _impl.coupon_times
complement_matching = _impl.complement_matching


def backends() -> dict:
    """All importable backends by name (used by tests and the benchmark)."""
    found = {"python": _kernels_py}
    try:
        from . import _kernels
        found["compiled"] = _kernels
    except ImportError:
        pass
    return found
