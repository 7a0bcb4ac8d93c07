"""Kernel dispatch: the compiled extension when importable, else the pure-Python fallback.

Set ``RSFORGE_PURE=1`` to force the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("RSFORGE_PURE"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

sq_dist_table = _impl.sq_dist_table
line_counts = _impl.line_counts
common_neighbor_counts = _impl.common_neighbor_counts

__all__ = ["BACKEND", "sq_dist_table", "line_counts", "common_neighbor_counts"]
