"""Radial grids, weights, and doubly weighted norms.

The radial half line is discretized log-uniformly: nodes r_j = exp(tau_j)
with tau equispaced.  All differentiation and quadrature happens in tau,
which resolves both the power-law weights near the origin and the
exponential tails at large radius on a single grid.

The norm of a function u is a sum over derivative orders j <= s of weighted
L^2 terms.  The core weight b(r) equals r below radius 1 and 1 above radius
2, with a fixed C^2 blend in between; the far-field weight is the bracket
<r> = sqrt(1 + r^2).  Two families are supported: the "M" family escalates
the bracket exponent with the derivative order, the "H" family keeps it
fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fredholm_disk.errors import GridTooCoarse, NonPositiveRadius, ShapeMismatch

_LN2 = math.log(2.0)

#: value of the core weight at r = 1.5, frozen as a regression constant
B_AT_1_5 = 1.0831334390208941


@dataclass(frozen=True)
class WeightPair:
    """Exponent pair: sigma governs the core weight, gamma the far field."""

    sigma: float
    gamma: float

    def __post_init__(self):
        if not (np.isfinite(self.sigma) and np.isfinite(self.gamma)):
            raise ValueError("weight exponents must be finite")


@dataclass(frozen=True)
class SpaceKind:
    """Norm family: 'M' (bracket exponent escalates with derivative order)
    or 'H' (fixed bracket exponent); s = derivative order; p fixed to 2."""

    family: str
    s: int
    p: int = 2

    def __post_init__(self):
        if self.family not in ("M", "H"):
            raise ValueError("family must be 'M' or 'H'")
        if self.s not in (0, 1, 2):
            raise ValueError("derivative order s must be 0, 1 or 2")
        if self.p != 2:
            raise ValueError("only p = 2 is supported")


class RadialGrid:
    """Log-uniform radial grid on [r_min, r_max] with n_r nodes."""

    def __init__(self, r_min: float = 1e-4, r_max: float = 40.0, n_r: int = 1024):
        if not (r_min > 0.0 and r_max > r_min):
            raise ValueError("need 0 < r_min < r_max")
        if n_r < 16:
            raise ValueError("need at least 16 radial nodes")
        self.r_min = float(r_min)
        self.r_max = float(r_max)
        self.n_r = int(n_r)
        self.tau = np.linspace(math.log(self.r_min), math.log(self.r_max), self.n_r)
        self.h = float(self.tau[1] - self.tau[0])
        self.nodes = np.exp(self.tau)
        self.nodes[0] = self.r_min
        self.nodes[-1] = self.r_max

    @classmethod
    def from_nodes(cls, nodes) -> "RadialGrid":
        nodes = np.asarray(nodes, dtype=np.float64)
        if nodes.ndim != 1 or nodes.size < 16:
            raise ValueError("need a 1-d array of at least 16 nodes")
        tau = np.log(nodes)
        dt = np.diff(tau)
        if np.any(nodes <= 0) or np.any(dt <= 0):
            raise ValueError("nodes must be positive and strictly increasing")
        h = (tau[-1] - tau[0]) / (nodes.size - 1)
        if np.max(np.abs(dt - h)) > 1e-12 * max(abs(h), 1e-30):
            raise ValueError("nodes are not log-uniform to 1e-12")
        return cls(nodes[0], nodes[-1], nodes.size)

    def refined(self, factor: int = 2) -> "RadialGrid":
        """Same window, tau step divided by `factor`."""
        return RadialGrid(self.r_min, self.r_max, (self.n_r - 1) * factor + 1)

    @property
    def interior(self) -> slice:
        """Nodes unaffected by one-sided boundary stencils."""
        return slice(3, self.n_r - 3)

    def __eq__(self, other):
        return (isinstance(other, RadialGrid)
                and self.r_min == other.r_min
                and self.r_max == other.r_max
                and self.n_r == other.n_r)

    def __repr__(self):
        return f"RadialGrid(r_min={self.r_min}, r_max={self.r_max}, n_r={self.n_r})"


def weight_b(r):
    """Core weight: r below 1, 1 above 2, C^2 monotone-bounded blend between.

    On [1, 2] the blend is exp(q(t)) with t = log2(r) and q the quintic
    Hermite matching log-weight values and two derivatives at both ends;
    it satisfies 1 <= b(r) <= r there.
    """
    r_arr = np.asarray(r, dtype=np.float64)
    if np.any(r_arr <= 0.0):
        raise NonPositiveRadius("core weight defined for r > 0 only")
    t = np.log(np.clip(r_arr, 1.0, 2.0)) / _LN2
    blend = np.exp(_LN2 * t * (1.0 + t * t * (-6.0 + t * (8.0 - 3.0 * t))))
    out = np.where(r_arr < 1.0, r_arr, np.where(r_arr > 2.0, 1.0, blend))
    return float(out) if np.isscalar(r) or getattr(r, "ndim", 1) == 0 else out


def bracket(x_norm):
    """<x> = sqrt(1 + |x|^2)."""
    arr = np.asarray(x_norm, dtype=np.float64)
    out = np.hypot(1.0, arr)
    return float(out) if arr.ndim == 0 else out


# ---------------------------------------------------------------------------
# finite differences in tau (4th order, one-sided closure at the edges)

def _fd_weights(offsets, m):
    o = np.asarray(offsets, dtype=np.float64)
    a = np.vander(o, increasing=True).T
    rhs = np.zeros(o.size)
    rhs[m] = math.factorial(m)
    return np.linalg.solve(a, rhs)

_D1_INT = _fd_weights([-2, -1, 0, 1, 2], 1)
_D1_EDGE = [_fd_weights([0, 1, 2, 3, 4], 1), _fd_weights([-1, 0, 1, 2, 3], 1)]
_D2_INT = _fd_weights([-2, -1, 0, 1, 2], 2)
_D2_EDGE = [_fd_weights([0, 1, 2, 3, 4, 5], 2), _fd_weights([-1, 0, 1, 2, 3, 4], 2)]


def _apply_stencil(values, h, w_int, w_edge, m):
    n = values.shape[0]
    out = np.empty_like(values)
    half = (w_int.size - 1) // 2
    acc = w_int[0] * values[0:n - 2 * half]
    for k in range(1, w_int.size):
        acc = acc + w_int[k] * values[k:n - 2 * half + k]
    out[half:n - half] = acc
    for i, w in enumerate(w_edge):
        start = i - (1 if i > 0 else 0)
        out[i] = w @ values[start:start + w.size]
        out[n - 1 - i] = ((-1.0) ** m) * (w[::-1] @ values[n - start - w.size:n - start])
    return out / h ** m


def dtau(values, grid: RadialGrid):
    """First tau-derivative, O(h^4)."""
    return _apply_stencil(np.asarray(values), grid.h, _D1_INT, _D1_EDGE, 1)


def dtau2(values, grid: RadialGrid):
    """Second tau-derivative, O(h^4)."""
    return _apply_stencil(np.asarray(values), grid.h, _D2_INT, _D2_EDGE, 2)


def radial_derivatives(values, grid: RadialGrid):
    """(u_r, u_rr) from tau-derivatives: d/dr = e^{-tau} d/dtau."""
    ut = dtau(values, grid)
    utt = dtau2(values, grid)
    r = grid.nodes
    return ut / r, (utt - ut) / (r * r)


# ---------------------------------------------------------------------------
# quadrature and norms

def radial_integral(values, grid: RadialGrid, nodes: slice | None = None):
    """Trapezoid in tau of `values` against the measure r dr."""
    integrand = np.asarray(values) * grid.nodes ** 2
    if nodes is not None:
        integrand = integrand[nodes]
    if integrand.shape[0] < 2:
        return 0.0 * integrand[..., 0]
    return grid.h * (integrand.sum(axis=0) - 0.5 * (integrand[0] + integrand[-1]))


def order_integrands(values, n, grid: RadialGrid):
    """Squared derivative magnitudes per order for one angular mode.

    Order 0: |u|^2.  Order 1: |u'|^2 + n^2 |u/r|^2.  Order 2 assembles the
    Cartesian second-derivative contributions |u''|^2, |u'/r|^2, n^2|u/r^2|^2
    and n^2 |u'/r - u/r^2|^2.
    """
    u = np.asarray(values)
    r = grid.nodes
    ur, urr = radial_derivatives(u, grid)
    n2 = float(n) ** 2
    i0 = np.abs(u) ** 2
    i1 = np.abs(ur) ** 2 + n2 * np.abs(u / r) ** 2
    mixed = ur / r - u / r ** 2
    i2 = (np.abs(urr) ** 2 + np.abs(ur / r) ** 2
          + n2 * np.abs(u / r ** 2) ** 2 + n2 * np.abs(mixed) ** 2)
    return [i0, i1, i2]


def order_term_norm(integrand_sq, grid: RadialGrid, sigma_pow, gamma_pow,
                    nodes: slice | None = None):
    """sqrt(2 pi * int I(r) b^{2 sigma_pow} <r>^{2 gamma_pow} r dr)."""
    w = weight_b(grid.nodes) ** (2.0 * sigma_pow) * bracket(grid.nodes) ** (2.0 * gamma_pow)
    val = radial_integral(integrand_sq * w, grid, nodes)
    return math.sqrt(max(2.0 * math.pi * float(val), 0.0))


def _collect_integrands(u):
    """Per-order integrands summed over modes; accepts a mode or a field."""
    if hasattr(u, "coeffs"):  # Field2D
        grid = u.grid
        parts = None
        for n, values in u.iter_modes():
            term = order_integrands(values, n, grid)
            parts = term if parts is None else [a + b for a, b in zip(parts, term)]
        if parts is None:
            parts = [np.zeros(grid.n_r) for _ in range(3)]
        return grid, parts
    grid = u.grid  # ModeFunction
    return grid, order_integrands(u.values, u.n, grid)


def weighted_norm(u, kind: SpaceKind, w: WeightPair, check_resolution: bool = False):
    """Doubly weighted Sobolev norm of a mode function or a field.

    The norm is the sum over derivative orders j <= s of the weighted L^2
    terms; 'M' escalates both exponents with j, 'H' only the core exponent.
    With check_resolution=True the value is compared against the one from
    the node-decimated grid and GridTooCoarse is raised on >1% disagreement.
    """
    grid, parts = _collect_integrands(u)
    total = 0.0
    for j in range(kind.s + 1):
        gpow = w.gamma + j if kind.family == "M" else w.gamma
        total += order_term_norm(parts[j], grid, w.sigma + j, gpow)
    if check_resolution:
        coarse = _decimated_norm(u, kind, w)
        if total > 0 and abs(coarse - total) > 0.01 * total:
            raise GridTooCoarse(
                f"norm changes by {abs(coarse - total) / total:.2%} under step doubling"
            )
    return total


def _decimated_norm(u, kind, w):
    from fredholm_disk import modes as _modes

    grid = u.grid
    if (grid.n_r - 1) % 2 != 0:
        raise ShapeMismatch("resolution check needs an even node-interval count")
    sub = RadialGrid(grid.r_min, grid.r_max, (grid.n_r - 1) // 2 + 1)
    if hasattr(u, "coeffs"):
        sub_field = _modes.Field2D.zeros(sub, u.n_theta)
        for n, values in u.iter_modes():
            sub_field.set_mode(n, values[::2])
        return weighted_norm(sub_field, kind, w)
    return weighted_norm(_modes.ModeFunction(u.n, u.values[::2], sub), kind, w)
