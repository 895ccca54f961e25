"""Kernel backend selection: compiled Cython core with a NumPy fallback.

The hot per-interface loops exist twice with identical semantics:
``lowmach._kernels`` (Cython) and ``lowmach._kernels_py`` (NumPy).  The
compiled module is preferred when importable; ``LOWMACH_KERNELS=python``
or ``set_kernel_backend("python")`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

_BACKENDS = {"python": _kernels_py}
try:  # pragma: no cover - depends on the build environment
    from . import _kernels as _kernels_c

    _BACKENDS["compiled"] = _kernels_c
except ImportError:  # pragma: no cover
    _kernels_c = None

_requested = os.environ.get("LOWMACH_KERNELS", "auto")
if _requested == "python" or ("compiled" not in _BACKENDS and _requested == "auto"):
    _active = "python"
elif _requested in ("auto", "compiled"):
    if "compiled" not in _BACKENDS:
        raise ImportError("LOWMACH_KERNELS=compiled but the extension is not built")
    _active = "compiled"
else:
    raise ValueError(f"unknown LOWMACH_KERNELS value {_requested!r}")


def kernel_backend() -> str:
    """Name of the active kernel backend ('compiled' or 'python')."""
    return _active


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def set_kernel_backend(name: str) -> None:
    """Switch kernel backends at runtime (used by tests and benchmarks)."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available; have {available_backends()}")
    _active = name


def kernels():
    """The active kernel module."""
    return _BACKENDS[_active]
