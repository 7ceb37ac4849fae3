"""Kernel backend selection.

The compiled ``_core`` extension is used when importable; otherwise the pure
Python ``_pycore`` twin.  Setting HOPSPANNER_PURE_PYTHON=1 forces the fallback.
"""

import importlib
import os

from . import _pycore


def _load_compiled():
    if os.environ.get("HOPSPANNER_PURE_PYTHON", "") in ("1", "true", "yes"):
        return None
    try:
        return importlib.import_module(__name__ + "._core")
    except ImportError:
        return None


_core = _load_compiled()

_impl = _core if _core is not None else _pycore

BACKEND = _impl.BACKEND
preorder = _impl.preorder
prune_preorder = _impl.prune_preorder
decomp_preorder = _impl.decomp_preorder
spanner_edges = _impl.spanner_edges
monotone_scan = _impl.monotone_scan
hop_limited = _impl.hop_limited
stretch_scan = _impl.stretch_scan
stretch_pairs = _impl.stretch_pairs
greedy_cover = _impl.greedy_cover


def backends():
    """Available backend modules keyed by name (used by the benchmark)."""
    out = {"python": _pycore}
    if _core is not None:
        out["cython"] = _core
    return out
