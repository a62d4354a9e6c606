"""Backend selection for the GF(q) polynomial kernels.

The compiled module is used when it imports and q fits in 31 bits; set
CLASSFORGE_PURE_PYTHON=1 to force the Python fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py as _py

_C = None
if not os.environ.get("CLASSFORGE_PURE_PYTHON"):
    try:
        from . import _kernels as _C  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _C = None

BACKEND = _C.BACKEND if _C is not None else _py.BACKEND
_SMALL = 1 << 31


def backend_for(q: int):
    return _C if (_C is not None and q < _SMALL) else _py
