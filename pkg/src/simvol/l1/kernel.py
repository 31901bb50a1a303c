"""Select the compiled map-search kernel when available.

Set ``SIMVOL_PURE_PYTHON=1`` to force the pure-Python implementation.
"""
from __future__ import annotations

import os

from ._kernel_py import NodeLimit
from ._kernel_py import find_next_map as find_next_map_py

find_next_map_c = None
if not os.environ.get("SIMVOL_PURE_PYTHON"):
    try:
        from ._kernel import find_next_map as find_next_map_c  # type: ignore[no-redef]
    except ImportError:  # extension not built
        find_next_map_c = None

find_next_map = find_next_map_c or find_next_map_py
BACKEND = "cython" if find_next_map_c is not None else "python"

__all__ = ["BACKEND", "NodeLimit", "find_next_map", "find_next_map_c", "find_next_map_py"]
