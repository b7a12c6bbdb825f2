"""Solver kernel selection: compiled extension if built, else pure Python.

Both kernels expose the same functions with identical semantics and
tolerances; the compiled one is just fast.  Force a choice with the
``MOSCAL_KERNEL`` environment variable ("c" or "py") or
:func:`set_kernel`.
"""

from __future__ import annotations

import os

from . import _pykernel

try:
    from . import _speedups  # compiled at install time; optional
except ImportError:  # pragma: no cover - depends on build environment
    _speedups = None

_forced = os.environ.get("MOSCAL_KERNEL", "").strip().lower()
if _forced == "py":
    _active = _pykernel
elif _forced == "c":
    if _speedups is None:
        raise ImportError("MOSCAL_KERNEL=c but the compiled kernel is not built")
    _active = _speedups
else:
    _active = _speedups if _speedups is not None else _pykernel


def active_kernel():
    return _active


def kernel_name() -> str:
    return "c" if _active is _speedups and _speedups is not None else "py"


def available_kernels() -> tuple[str, ...]:
    return ("py", "c") if _speedups is not None else ("py",)


def set_kernel(name: str):
    """Switch kernels at runtime (used by tests and the benchmark)."""
    global _active
    if name == "py":
        _active = _pykernel
    elif name == "c":
        if _speedups is None:
            raise ValueError("compiled kernel is not available")
        _active = _speedups
    else:
        raise ValueError(f"unknown kernel {name!r}")
    return _active
