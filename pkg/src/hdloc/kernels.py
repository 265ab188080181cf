"""Backend selection for the hot kernels.

The numba-compiled kernels are used when numba imports cleanly; setting the
environment variable HDLOC_NO_NUMBA=1 (before import) forces the pure-numpy
fallback. `benchmarks/bench_kernels.py` compares the two paths.
"""

from __future__ import annotations

import os

_force_numpy = os.environ.get("HDLOC_NO_NUMBA", "") not in ("", "0")

if _force_numpy:
    from . import _kernels_numpy as _impl
    BACKEND = "numpy"
else:
    try:
        from . import _kernels_numba as _impl
        BACKEND = "numba"
    except ImportError:
        from . import _kernels_numpy as _impl
        BACKEND = "numpy"

sr_fast_core = _impl.sr_fast_core
cross_quad_reduced = _impl.cross_quad_reduced
cross_quad_full = _impl.cross_quad_full
