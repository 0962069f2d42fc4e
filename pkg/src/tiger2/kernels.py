"""Select the graph kernel implementation.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
pure-Python module is used. Set ``TIGER2_PURE_PYTHON=1`` to force the
fallback (the benchmark and the backend-parity tests rely on this switch
being read at import time).
"""
import os
from array import array

if os.environ.get("TIGER2_PURE_PYTHON"):
    from ._pykernels import discontinuous_nodes, find_cycles, reachable_positions
    BACKEND = "python"
else:
    try:
        from ._ckernels import discontinuous_nodes, find_cycles, reachable_positions
        BACKEND = "cython"
    except ImportError:
        from ._pykernels import discontinuous_nodes, find_cycles, reachable_positions
        BACKEND = "python"

__all__ = ["BACKEND", "csr", "discontinuous_nodes", "find_cycles",
           "reachable_positions"]


def csr(n, pairs):
    """Build ``(indptr, indices)`` int64 arrays from ``(src, dst)`` pairs.

    Successor order follows the order of ``pairs``.
    """
    counts = [0] * (n + 1)
    for s, _ in pairs:
        counts[s + 1] += 1
    for i in range(n):
        counts[i + 1] += counts[i]
    indptr = array("q", counts)
    fill = counts[:-1]
    indices = array("q", bytes(8 * len(pairs)))
    for s, d in pairs:
        indices[fill[s]] = d
        fill[s] += 1
    return indptr, indices
