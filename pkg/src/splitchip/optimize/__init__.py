"""Partition optimizers: branch and bound plus the brute-force oracle.

The hot search loop has two interchangeable kernels: a Cython extension
and a pure-Python fallback, selected at import.  Set ``SPLITCHIP_PURE=1``
to force the fallback.
"""

import os

from . import _pykernel

if os.environ.get("SPLITCHIP_PURE"):
    _default_kernel = _pykernel
else:
    try:
        from . import _kernel as _default_kernel  # type: ignore[attr-defined]
    except ImportError:
        _default_kernel = _pykernel

BACKEND = _default_kernel.BACKEND

from .optimizer import (  # noqa: E402
    OptimizerResult,
    PrunedNode,
    branch_and_bound,
    brute_force,
    tie_break,
)
from .problem import (  # noqa: E402
    allowed_configurations,
    build_problem,
    module_search_order,
)

__all__ = [
    "BACKEND",
    "OptimizerResult",
    "PrunedNode",
    "branch_and_bound",
    "brute_force",
    "tie_break",
    "allowed_configurations",
    "build_problem",
    "module_search_order",
]
