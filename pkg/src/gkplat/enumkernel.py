"""Kernel selection: compiled enumeration core when available, else the
pure-Python fallback with identical semantics.

`BACKEND` reports which one is active; set GKPLAT_PURE_PYTHON=1 to force the
fallback.  `benchmarks/bench_enum.py` compares the two.
"""

import os

if os.environ.get("GKPLAT_PURE_PYTHON"):
    from . import _enum_py as _impl
else:
    try:
        from . import _enum_cy as _impl
    except ImportError:  # pragma: no cover - depends on build environment
        from . import _enum_py as _impl

BACKEND = _impl.BACKEND
gso = _impl.gso
enumerate_points = _impl.enumerate_points
shortest_nonzero = _impl.shortest_nonzero
closest = _impl.closest
