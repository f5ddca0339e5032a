"""Numeric backend selection.

The hot kernels (Bessel evaluation, damped cumulative quadrature) exist in two
implementations: a numba-compiled scalar version and a vectorized pure-numpy
fallback.  The environment variable ``FREDHOLM_DISK_BACKEND`` selects one at
import time (``"numba"`` or ``"numpy"``); without it, numba is used when it
imports cleanly.  ``use()`` switches programmatically (tests, benchmarks).
"""

from __future__ import annotations

import os
import warnings

_ENV_VAR = "FREDHOLM_DISK_BACKEND"
_VALID = ("numba", "numpy")

_active_name: str | None = None
_active_module = None


def _load(name: str):
    if name == "numba":
        from fredholm_disk import _kernels_numba as mod
    else:
        from fredholm_disk import _kernels_numpy as mod
    return mod


def _initial_choice() -> str:
    env = os.environ.get(_ENV_VAR, "").strip().lower()
    if env:
        if env not in _VALID:
            raise ValueError(
                f"{_ENV_VAR} must be one of {_VALID}, got {env!r}"
            )
        return env
    try:
        import numba  # noqa: F401
        return "numba"
    except ImportError:
        warnings.warn("numba not importable; falling back to the numpy backend")
        return "numpy"


def use(name: str) -> None:
    """Select the kernel backend by name ('numba' or 'numpy')."""
    global _active_name, _active_module
    if name not in _VALID:
        raise ValueError(f"backend must be one of {_VALID}, got {name!r}")
    _active_module = _load(name)
    _active_name = name


def active_name() -> str:
    if _active_name is None:
        use(_initial_choice())
    return _active_name


def kernels():
    """Return the active kernel module."""
    if _active_module is None:
        use(_initial_choice())
    return _active_module
