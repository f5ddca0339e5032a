"""Near-kernel sequences at resonant weights.

At a resonant weight one homogeneous profile sits exactly at the growth
threshold of the domain norm; windowing it with ever longer log-radius
plateaus produces normalized elements u_j whose images shrink like 1/j,
the numerical witness that the range is not closed there.

The element is u_j = chi_j(tau) r^s cos(k theta) with s the resonant
exponent (s = -(sigma+1) on the interior side, -(gamma+1) on the exterior
side) and chi_j a C^2 window: quintic ramps of tau-length j around a
plateau of length j.  For the two operators with the -1 term the window is
kept a further distance j inside the origin region so the zeroth-order term
stays exponentially small next to the 1/j ramp contributions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fredholm_disk import geometry
from fredholm_disk.errors import GridTooNarrow
from fredholm_disk.fredholm import q_exponent, range_weights
from fredholm_disk.geometry import RadialGrid, SpaceKind, WeightPair
from fredholm_disk.modes import Field2D, OperatorKind, apply_operator


@dataclass(frozen=True)
class WeylParams:
    kind: OperatorKind
    mode: int
    side: str  # "interior" | "exterior"
    j: float
    branch: int = 0  # +1 / -1: which +-threshold; 0 = infer from the weights

    def __post_init__(self):
        if self.side not in ("interior", "exterior"):
            raise ValueError("side must be 'interior' or 'exterior'")
        if self.side == "exterior" and self.kind != OperatorKind.EULER:
            raise ValueError(
                "only the equidimensional operator has exterior resonances")
        if self.j < 1.0:
            raise ValueError("scale parameter j must be >= 1")
        if self.mode < 0:
            raise ValueError("mode must be >= 0")
        if self.branch not in (-1, 0, 1):
            raise ValueError("branch must be -1, 0 or +1")


def element_exponent(params: WeylParams, w: WeightPair) -> float:
    """Power-law exponent of the windowed profile.

    The magnitude is pinned by the mode (m for the plain Helmholtz operator,
    q(m) otherwise); the sign is the one whose resonance the relevant weight
    sits at (or nearest to, for off-resonance control runs): s = -+|s| for
    weight + 1 = +-|s|.
    """
    if params.kind == OperatorKind.HELMHOLTZ:
        magnitude = float(params.mode)
    else:
        magnitude = q_exponent(params.mode)
    branch = params.branch
    if branch == 0:
        shifted = (w.sigma if params.side == "interior" else w.gamma) + 1.0
        branch = 1 if shifted >= 0.0 else -1
    return -branch * magnitude


def _smoothstep(x):
    x = np.clip(x, 0.0, 1.0)
    return x ** 3 * (10.0 + x * (6.0 * x - 15.0))


def window(tau, lo: float, j: float):
    """C^2 window: up-ramp [lo, lo+j], plateau [lo+j, lo+2j], down-ramp to lo+3j."""
    return _smoothstep((tau - lo) / j) * _smoothstep((lo + 3.0 * j - tau) / j)


def _origin_offset(kind: OperatorKind, j: float) -> float:
    # keep the window away from r ~ 1 when the operator carries the -1 term
    return j if kind in (OperatorKind.HELMHOLTZ, OperatorKind.SHIFTED_HELMHOLTZ) else 0.0


def window_bounds(params: WeylParams) -> tuple[float, float]:
    off = _origin_offset(params.kind, params.j)
    if params.side == "interior":
        return (-3.0 * params.j - off, -off)
    return (off, 3.0 * params.j + off)


def weyl_element(params: WeylParams, w: WeightPair, grid: RadialGrid,
                 n_theta: int = 16) -> Field2D:
    """The windowed resonant profile as a field of unit domain norm."""
    s = element_exponent(params, w)
    lo, hi = window_bounds(params)
    if grid.tau[0] > lo - 4.0 * grid.h or grid.tau[-1] < hi + 4.0 * grid.h:
        raise GridTooNarrow(
            f"window [{lo:.2f}, {hi:.2f}] in tau does not fit inside the grid "
            f"[{grid.tau[0]:.2f}, {grid.tau[-1]:.2f}] with stencil margin"
        )
    while params.mode > n_theta // 2 - 1:
        n_theta *= 2
    chi = window(grid.tau, lo, params.j)
    g = chi * np.exp(s * grid.tau)
    field = Field2D.zeros(grid, n_theta)
    k = params.mode
    if k == 0:
        field.set_mode(0, g.astype(np.complex128))
    else:
        field.set_mode(k, 0.5 * g)
        field.set_mode(-k, 0.5 * g)
    family = "M" if params.kind == OperatorKind.EULER else "H"
    norm = geometry.weighted_norm(field, SpaceKind(family, 2), w)
    return field * (1.0 / norm)


def image_ratio(params: WeylParams, w: WeightPair, grid: RadialGrid) -> float:
    """||L u_j|| in the target norm for the unit-normalized element."""
    u = weyl_element(params, w, grid)
    image = apply_operator(params.kind, u)
    rw = range_weights(params.kind, w)
    total = np.zeros(grid.n_r)
    for _, values in image.iter_modes():
        total += np.abs(values) ** 2
    return geometry.order_term_norm(total, grid, rw.sigma, rw.gamma, grid.interior)


def suggested_grid(kind: OperatorKind, side: str, j_max: float,
                   step: float = 0.02) -> RadialGrid:
    """A grid wide enough for scales up to j_max, with margin for stencils."""
    off = _origin_offset(kind, j_max)
    if side == "interior":
        lo, hi = -3.0 * j_max - off - 1.0, max(1.0, off + 1.0)
    else:
        lo, hi = -1.0, 3.0 * j_max + off + 1.0
    n = int(round((hi - lo) / step)) + 1
    return RadialGrid(math.exp(lo), math.exp(hi), max(n, 64))


def ratio_sequence(kind: OperatorKind, mode: int, side: str, w: WeightPair,
                   js, grid: RadialGrid | None = None,
                   branch: int = 0) -> list[float]:
    """Image norms of the normalized elements for each scale in js.

    Pass the branch of the threshold being probed explicitly when running
    off-resonance controls, so the window keeps the tested exponent.
    """
    js = [float(j) for j in js]
    if grid is None:
        grid = suggested_grid(kind, side, max(js))
    return [image_ratio(WeylParams(kind, mode, side, j, branch), w, grid)
            for j in js]
