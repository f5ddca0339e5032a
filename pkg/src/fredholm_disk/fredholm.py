"""Weight-regime classification: kernel/cokernel bases, index, resonances.

For each operator the kernel and cokernel are spanned by explicit separated
profiles g(r) cos(k theta), g(r) sin(k theta).  Membership is governed by
threshold inequalities in the weight exponents:

* lap - 1:        kernel  K_m  for sigma > m - 1,
                  cokernel K_m for sigma < -m - 1;       resonant at integers.
* lap - 1/r^2 - 1: as above with thresholds q(m) - 1 and -q(m) - 1 and
                  radial profile K_{q(m)},  q(m) = sqrt(m^2 + 1).
* lap - 1/r^2:    kernel  r^{-q(k)} for sigma + 1 > q(k),
                          r^{+q(k)} for gamma + 1 < -q(k);
                  cokernel r^{+q(k)} for gamma + 1 > q(k),
                          r^{-q(k)} for sigma + 1 < -q(k);
                  resonant when sigma + 1 or gamma + 1 hits any +-q(k).

Identically zero combinations (sin of 0*theta) are excluded, so a mode-k
threshold contributes 1 element for k = 0 and 2 for k >= 1 per trig pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from fredholm_disk import bessel, geometry
from fredholm_disk.errors import ResonantWeight
from fredholm_disk.geometry import RadialGrid, SpaceKind, WeightPair
from fredholm_disk.modes import Field2D, OperatorKind

RESONANCE_TOL = 1e-9


@dataclass(frozen=True)
class RadialForm:
    """Radial profile of a basis element: bessel_K(order) or power(exponent)."""

    kind: str  # "bessel_K" | "power"
    param: float

    def label(self) -> str:
        if self.kind == "bessel_K":
            return f"K[{self.param:g}]"
        return f"r^{self.param:g}"


@dataclass(frozen=True)
class BasisElement:
    mode: int
    parity: str  # "cos" | "sin"
    radial: RadialForm
    side: str  # "kernel" | "cokernel"

    def label(self) -> str:
        ang = "1" if self.mode == 0 else f"{self.parity}({self.mode}t)"
        return f"{self.radial.label()}*{ang}"


@dataclass
class FredholmReport:
    kind: OperatorKind
    weights: WeightPair
    status: str  # "fredholm" | "resonant"
    kernel_basis: list[BasisElement] = field(default_factory=list)
    cokernel_basis: list[BasisElement] = field(default_factory=list)
    index: int = 0
    resonant_modes: list[int] = field(default_factory=list)


def q_exponent(k: int) -> float:
    """q(k) = sqrt(k^2 + 1)."""
    return math.sqrt(k * k + 1.0)


def _trig_elements(mode: int, radial: RadialForm, side: str) -> list[BasisElement]:
    out = [BasisElement(mode, "cos", radial, side)]
    if mode >= 1:
        out.append(BasisElement(mode, "sin", radial, side))
    return out


def _modes_below(threshold: float, order_of) -> list[int]:
    """All k >= 0 with order_of(k) < threshold (order_of increasing)."""
    out = []
    k = 0
    while order_of(k) < threshold:
        out.append(k)
        k += 1
    return out


def classify(kind: OperatorKind, w: WeightPair, tol: float = RESONANCE_TOL) -> FredholmReport:
    """Total classification of the operator at the given weights."""
    sigma, gamma = w.sigma, w.gamma
    report = FredholmReport(kind=kind, weights=w, status="fredholm")

    if kind in (OperatorKind.HELMHOLTZ, OperatorKind.SHIFTED_HELMHOLTZ):
        if kind == OperatorKind.HELMHOLTZ:
            order_of = float
            form = lambda m: RadialForm("bessel_K", float(m))  # noqa: E731
        else:
            order_of = q_exponent
            form = lambda m: RadialForm("bessel_K", q_exponent(m))  # noqa: E731
        # resonant when sigma hits a kernel threshold nu-1 or a cokernel one -nu-1
        res = [m for m in range(_mode_scan_cap(sigma))
               if abs(sigma - (order_of(m) - 1.0)) <= tol
               or abs(sigma + order_of(m) + 1.0) <= tol]
        if res:
            report.status = "resonant"
            report.resonant_modes = res
            return report
        for m in _modes_below(sigma + 1.0, order_of):
            report.kernel_basis.extend(_trig_elements(m, form(m), "kernel"))
        for m in _modes_below(-sigma - 1.0, order_of):
            report.cokernel_basis.extend(_trig_elements(m, form(m), "cokernel"))
    else:
        res = sorted({k for k in range(_mode_scan_cap(max(abs(sigma), abs(gamma))))
                      if abs(abs(sigma + 1.0) - q_exponent(k)) <= tol
                      or abs(abs(gamma + 1.0) - q_exponent(k)) <= tol})
        if res:
            report.status = "resonant"
            report.resonant_modes = res
            return report
        for k in _modes_below(sigma + 1.0, q_exponent):
            report.kernel_basis.extend(
                _trig_elements(k, RadialForm("power", -q_exponent(k)), "kernel"))
        for k in _modes_below(-(gamma + 1.0), q_exponent):
            report.kernel_basis.extend(
                _trig_elements(k, RadialForm("power", q_exponent(k)), "kernel"))
        for k in _modes_below(gamma + 1.0, q_exponent):
            report.cokernel_basis.extend(
                _trig_elements(k, RadialForm("power", q_exponent(k)), "cokernel"))
        for k in _modes_below(-(sigma + 1.0), q_exponent):
            report.cokernel_basis.extend(
                _trig_elements(k, RadialForm("power", -q_exponent(k)), "cokernel"))

    report.index = len(report.kernel_basis) - len(report.cokernel_basis)
    return report


def _mode_scan_cap(weight_scale: float) -> int:
    return max(4, int(abs(weight_scale)) + 4)


def radial_profile(elem: BasisElement, grid: RadialGrid) -> np.ndarray:
    """Sample the element's radial factor on the grid."""
    if elem.radial.kind == "bessel_K":
        return np.asarray(bessel.bessel_k(elem.radial.param, grid.nodes))
    return grid.nodes ** elem.radial.param


def element_field(elem: BasisElement, grid: RadialGrid, n_theta: int) -> Field2D:
    """The element as a real field: g(r) cos/sin(k theta), unnormalized."""
    g = radial_profile(elem, grid)
    out = Field2D.zeros(grid, n_theta)
    k = elem.mode
    if k == 0:
        out.set_mode(0, g.astype(np.complex128))
    elif elem.parity == "cos":
        out.set_mode(k, 0.5 * g)
        out.set_mode(-k, 0.5 * g)
    else:
        out.set_mode(k, -0.5j * g)
        out.set_mode(-k, 0.5j * g)
    return out


def _domain_kind(kind: OperatorKind) -> SpaceKind:
    family = "M" if kind == OperatorKind.EULER else "H"
    return SpaceKind(family, 2)


def range_weights(kind: OperatorKind, w: WeightPair) -> WeightPair:
    """Weights of the target space the operator maps into."""
    if kind == OperatorKind.EULER:
        return WeightPair(w.sigma + 2.0, w.gamma + 2.0)
    return WeightPair(w.sigma + 2.0, w.gamma)


def kernel_basis_field(report: FredholmReport, grid: RadialGrid,
                       n_theta: int = 64) -> list[Field2D]:
    """Sampled kernel basis, each normalized to unit domain norm."""
    if report.status != "fredholm":
        raise ResonantWeight("no basis at resonant weights")
    kind = _domain_kind(report.kind)
    out = []
    for elem in report.kernel_basis:
        f = element_field(elem, grid, n_theta)
        f = f * (1.0 / geometry.weighted_norm(f, kind, report.weights))
        out.append(f)
    return out


def cokernel_basis_field(report: FredholmReport, grid: RadialGrid,
                         n_theta: int = 64) -> list[Field2D]:
    """Sampled cokernel basis, normalized in the dual norm of the target."""
    if report.status != "fredholm":
        raise ResonantWeight("no basis at resonant weights")
    rw = range_weights(report.kind, report.weights)
    dual = WeightPair(-rw.sigma, -rw.gamma)
    out = []
    for elem in report.cokernel_basis:
        f = element_field(elem, grid, n_theta)
        f = f * (1.0 / geometry.weighted_norm(f, SpaceKind("H", 0), dual))
        out.append(f)
    return out


def pairing(f: Field2D, elem: BasisElement) -> float:
    """Unweighted L^2(R^2) pairing of a field with a basis element."""
    g = radial_profile(elem, f.grid)
    k = elem.mode
    if k > f.max_mode:
        return 0.0
    fk = f.coeffs[f._row(k)]
    if k == 0:
        val = 2.0 * math.pi * geometry.radial_integral(fk * g, f.grid)
        return float(np.real(val))
    fmk = f.coeffs[f._row(-k)]
    if elem.parity == "cos":
        val = math.pi * geometry.radial_integral((fk + fmk) * g, f.grid)
    else:
        val = 1j * math.pi * geometry.radial_integral((fk - fmk) * g, f.grid)
    return float(np.real(val))


def solvability_defect(kind: OperatorKind, f: Field2D, w: WeightPair):
    """Pairings of f with every cokernel element; all-zero iff f is in
    the range (up to quadrature tolerance)."""
    report = classify(kind, w)
    if report.status != "fredholm":
        raise ResonantWeight("solvability pairings undefined at resonant weights")
    return [(elem, pairing(f, elem)) for elem in report.cokernel_basis]
