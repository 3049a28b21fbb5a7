"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
module.  Setting ``STRATASOLVE_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels

BACKEND: str
_impl: ModuleType

if os.environ.get("STRATASOLVE_PURE_PYTHON", "") not in ("", "0"):
    _impl, BACKEND = _pykernels, "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl, BACKEND = _pykernels, "python"

UNKNOWN, TRUE, FALSE = _pykernels.UNKNOWN, _pykernels.TRUE, _pykernels.FALSE


def backends() -> dict[str, ModuleType]:
    """Every importable backend by name, for differential tests and benchmarks."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels

        found["cython"] = _ckernels
    except ImportError:
        pass
    return found


def reduct_fixpoint(prog, blocked) -> bytearray:
    return _impl.reduct_fixpoint(prog, blocked)


def neg_propagate(prog, neg):
    return _impl.neg_propagate(prog, neg)


def satisfies_all(prog, truth) -> bool:
    return _impl.satisfies_all(prog, truth)


def brute_force(prog) -> list[int]:
    return _impl.brute_force(prog)
