"""Kernel backend selection.

The compiled extension is preferred when importable; otherwise the pure
Python fallback is used.  Set AMPDIST_PURE_PYTHON=1 to force the fallback
(useful for benchmarking and equivalence tests).  Both backends return
bit-identical, correctly rounded results.
"""

from __future__ import annotations

import os

import numpy as np

if os.environ.get("AMPDIST_PURE_PYTHON"):
    from ampdist import _kernels_py as _impl
else:
    try:
        from ampdist import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from ampdist import _kernels_py as _impl


def backend_name() -> str:
    """Name of the active kernel backend ("cython" or "python")."""
    return _impl.BACKEND_NAME


def constrained_spin_sum(components, fixed: dict[int, int]) -> tuple[float, float, float]:
    """Exact sum of signed direction components over sign configurations.

    ``components`` is an (n, 3) array of direction vectors and ``fixed`` maps
    axis index to a pinned sign (+1/-1); free axes range over both signs.
    """
    comps = np.ascontiguousarray(components, dtype=np.float64)
    idx = np.fromiter(fixed.keys(), dtype=np.int64, count=len(fixed))
    sgn = np.fromiter(fixed.values(), dtype=np.int64, count=len(fixed))
    return _impl.constrained_spin_sum(comps, idx, sgn)
