"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-Python twin is
the fallback. Set DEPTHREAT_PURE_PYTHON=1 to force the fallback (used by the
benchmark and the backend-equivalence tests).
"""

import os

if os.environ.get("DEPTHREAT_PURE_PYTHON"):
    from . import _kernel_py as kernel
else:
    try:
        from . import _kernel_cy as kernel  # type: ignore[no-redef]
    except ImportError:
        from . import _kernel_py as kernel  # type: ignore[no-redef]

KERNEL_BACKEND: str = kernel.BACKEND
