"""Modified Bessel functions I_nu, K_nu and derivatives for real order nu >= 0.

Built from scratch (no scipy): ascending series for I, a reflection-form
series (x <= 2) plus continued fraction (x > 2) for K, and upward order
recurrence.  Orders up to 64 are supported; both integer orders and the
irrational orders sqrt(k^2 + 1) that the mode solvers need are handled by the
same code path.  Scaled variants e^{-z} I_nu(z) and e^{z} K_nu(z) avoid
overflow/underflow in Green's-function products at large radius.

Relative accuracy is ~1e-13 over z in [1e-6, 60] for nu <= 64 (tested against
high-precision oracles), comfortably inside the 1e-10 contract used by the
verification suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fredholm_disk import backend
from fredholm_disk.errors import (
    NonPositiveArgument,
    OrderOutOfRange,
    OverflowBeyondRange,
)

ORDER_MAX = 64.0


@dataclass(frozen=True)
class BesselOrder:
    """Validated order nu >= 0.

    is_integer reports whether nu sits within 1e-12 of an integer; the
    evaluation code does not branch on it, but callers (and tests) use it to
    pick identities that only hold at integer order.
    """

    nu: float

    def __post_init__(self):
        nu = float(self.nu)
        if not np.isfinite(nu) or nu < 0.0:
            raise OrderOutOfRange(f"order must be finite and >= 0, got {nu}")
        if nu > ORDER_MAX:
            raise OrderOutOfRange(f"order {nu} exceeds supported maximum {ORDER_MAX}")

    @property
    def is_integer(self) -> bool:
        return abs(self.nu - round(self.nu)) <= 1e-12


def _as_order(order) -> float:
    if isinstance(order, BesselOrder):
        return float(order.nu)
    return float(BesselOrder(float(order)).nu)


def _as_z(z):
    arr = np.asarray(z, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
        scalar = True
    else:
        scalar = False
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise NonPositiveArgument("argument z must be finite and > 0")
    return arr, scalar


def _finalize(values, scalar, what):
    if not np.all(np.isfinite(values)):
        raise OverflowBeyondRange(
            f"{what} not representable in double precision; "
            "use the scaled variant (scaled=True) where applicable"
        )
    return float(values[0]) if scalar else values


def bessel_i(order, z, scaled: bool = False):
    """I_nu(z), or e^{-z} I_nu(z) when scaled=True.  z may be an array."""
    nu = _as_order(order)
    zs, scalar = _as_z(z)
    k = backend.kernels()
    ie = k.iv_scaled_arr(nu, zs)
    with np.errstate(over="ignore"):
        values = ie if scaled else ie * np.exp(zs)
    return _finalize(values, scalar, f"I_{nu}")


def bessel_k(order, z, scaled: bool = False):
    """K_nu(z), or e^{z} K_nu(z) when scaled=True."""
    nu = _as_order(order)
    zs, scalar = _as_z(z)
    k = backend.kernels()
    ke, _ = k.kv_scaled_pair_arr(nu, zs)
    values = ke if scaled else ke * np.exp(-zs)
    return _finalize(values, scalar, f"K_{nu}")


def bessel_i_prime(order, z, scaled: bool = False):
    """d/dz I_nu(z) via I'_nu = I_{nu+1} + (nu/z) I_nu (scaled: times e^{-z})."""
    nu = _as_order(order)
    zs, scalar = _as_z(z)
    k = backend.kernels()
    ie = k.iv_scaled_arr(nu, zs)
    ie1 = k.iv_scaled_arr(nu + 1.0, zs)
    ipe = ie1 + (nu / zs) * ie
    values = ipe if scaled else ipe * np.exp(zs)
    return _finalize(values, scalar, f"I'_{nu}")


def bessel_k_prime(order, z, scaled: bool = False):
    """d/dz K_nu(z) via K'_nu = (nu/z) K_nu - K_{nu+1} (scaled: times e^{z})."""
    nu = _as_order(order)
    zs, scalar = _as_z(z)
    k = backend.kernels()
    ke, ke1 = k.kv_scaled_pair_arr(nu, zs)
    kpe = (nu / zs) * ke - ke1
    values = kpe if scaled else kpe * np.exp(-zs)
    return _finalize(values, scalar, f"K'_{nu}")


def wronskian_residual(order, z):
    """|z (I'_nu K_nu - I_nu K'_nu) - 1|, computed in scaled arithmetic.

    The exact Wronskian is 1/z, so the residual measures the joint accuracy
    of all four evaluations; the contract is <= 1e-10 on z in [1e-3, 30].
    """
    nu = _as_order(order)
    zs, scalar = _as_z(z)
    k = backend.kernels()
    ie = k.iv_scaled_arr(nu, zs)
    ie1 = k.iv_scaled_arr(nu + 1.0, zs)
    ke, ke1 = k.kv_scaled_pair_arr(nu, zs)
    ipe = ie1 + (nu / zs) * ie
    kpe = (nu / zs) * ke - ke1
    values = np.abs(zs * (ipe * ke - ie * kpe) - 1.0)
    return float(values[0]) if scalar else values
