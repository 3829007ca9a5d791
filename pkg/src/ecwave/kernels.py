"""Kernel selection: compiled extension when importable, numpy otherwise.

Set ``ECWAVE_PURE_PYTHON=1`` to force the numpy versions.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("ECWAVE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on the build
        pass
    else:
        _impl = _compiled
        BACKEND = "compiled"


def get_backend(name: str | None = None):
    """Return the kernel module for ``name`` ("compiled", "python" or None for default)."""
    if name is None:
        return _impl
    if name == "python":
        return _kernels_py
    if name == "compiled":
        from . import _kernels as mod  # type: ignore[attr-defined]
        return mod
    raise ValueError(f"unknown backend {name!r}")


acceleration = _impl.acceleration
advance = _impl.advance
characteristic_sample = _impl.characteristic_sample
source_norms = _impl.source_norms
