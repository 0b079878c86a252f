"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
module takes over.  Setting ``CHERNOFFLAB_PURE_PYTHON=1`` forces the
fallback, which is how the test-suite and the benchmark exercise both.
"""

import os

if os.environ.get("CHERNOFFLAB_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        from . import _kernels_py as kernels

BACKEND = kernels.BACKEND

__all__ = ["kernels", "BACKEND"]
