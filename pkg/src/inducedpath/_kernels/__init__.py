"""Hot loops, compiled when the Cython extension is built.

Set ``INDUCEDPATH_PURE_PYTHON=1`` to force the pure-Python fallback.
``BACKEND`` names the implementation in use.
"""

import os

from . import _pure

if os.environ.get("INDUCEDPATH_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pure
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pure

BACKEND = "python" if _impl is _pure else "cython"

grow_forest = _impl.grow_forest
classify_connectors = _impl.classify_connectors
conflict_dfs = _impl.conflict_dfs


def compiled():
    """The compiled module, or None when it is not available."""
    try:
        from . import _ckernels
    except ImportError:
        return None
    return _ckernels
