"""Hot loops: the addressing search and Held-Karp.

The compiled extension is used when it was built; otherwise the pure-Python
module is used.  Set ``BSEP_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels as python

FOUND, INFEASIBLE, BUDGET = python.FOUND, python.INFEASIBLE, python.BUDGET

compiled = None
if os.environ.get("BSEP_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled
    except ImportError:  # extension not built
        compiled = None

_impl = compiled if compiled is not None else python
BACKEND = "cython" if compiled is not None else "python"

search_rows = _impl.search_rows
held_karp_path = _impl.held_karp_path
held_karp_cycle = _impl.held_karp_cycle

__all__ = ["BACKEND", "FOUND", "INFEASIBLE", "BUDGET", "search_rows", "held_karp_path", "held_karp_cycle"]
