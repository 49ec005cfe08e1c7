"""Stepping kernels with a compiled core and a numpy fallback.

The backend is chosen once at import.  ``TDQWALK_BACKEND`` may be ``auto``
(default: compiled if importable), ``cython`` (fail if missing) or
``python``.
"""

from __future__ import annotations

import os
import types

from . import _fallback

try:
    from . import _step as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS: dict[str, types.ModuleType] = {"python": _fallback}
if _compiled is not None:
    BACKENDS["cython"] = _compiled


def _select(name: str) -> tuple[str, types.ModuleType]:
    if name == "auto":
        name = "cython" if "cython" in BACKENDS else "python"
    if name not in ("cython", "python"):
        raise ImportError(f"TDQWALK_BACKEND must be auto, cython or python, got {name!r}")
    if name not in BACKENDS:
        raise ImportError("TDQWALK_BACKEND=cython but the compiled kernel is not built")
    return name, BACKENDS[name]


BACKEND, _active = _select(os.environ.get("TDQWALK_BACKEND", "auto").strip().lower())
advance = _active.advance
norm_sq = _active.norm_sq

__all__ = ["BACKEND", "BACKENDS", "advance", "norm_sq"]
