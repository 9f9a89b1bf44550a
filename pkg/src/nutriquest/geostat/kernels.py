"""Kernel backend selection: compiled extension when available, numpy
fallback otherwise. Set NUTRIQUEST_PURE=1 to force the fallback."""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("NUTRIQUEST_PURE") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND: str = _impl.BACKEND
kde_grid = _impl.kde_grid
window_sums = _impl.window_sums


def backends() -> dict[str, object]:
    """All importable backends, keyed by name (for tests and benchmarks)."""
    found = {"pure": _kernels_py}
    try:
        from . import _kernels
        found["compiled"] = _kernels
    except ImportError:
        pass
    return found
