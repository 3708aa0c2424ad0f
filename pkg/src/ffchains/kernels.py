"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
numpy/pure-Python ``_pykernels`` module is used.  Setting the environment
variable ``FFCHAINS_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _pykernels

try:
    if os.environ.get("FFCHAINS_PURE_PYTHON"):
        raise ImportError("pure-python backend forced")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

BACKEND = "cython" if _ckernels is not None else "python"
_impl = BACKENDS[BACKEND]

close_inplace = _impl.close_inplace
first_fit = _impl.first_fit
wall_violation = _impl.wall_violation
embed_search = _impl.embed_search
bipartite_matching = _impl.bipartite_matching


def get_backend(name):
    """Return the kernel module registered under ``name`` ("cython" or "python")."""
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available") from None
