"""Manufactured solutions, inequality checkers and empirical bound constants.

The manufactured families give (u, f = L u) pairs with f in closed form, so
solver accuracy is measured against an independent analytic oracle.  The two
ratio functions are the numerical witnesses of the a-priori inequalities the
solver theory rests on: they must stay bounded over a corpus of smooth,
effectively compactly supported fields and be stable under grid refinement.
"""

from __future__ import annotations

import math

import numpy as np

from fredholm_disk import bessel, fredholm, geometry, greens, weyl
from fredholm_disk.errors import ResonantWeight, UnknownFamily, ZeroDenominator
from fredholm_disk.fredholm import classify
from fredholm_disk.geometry import RadialGrid, SpaceKind, WeightPair
from fredholm_disk.modes import (
    Field2D,
    ModeFunction,
    OperatorKind,
    laplacian_mode,
    mode_order,
)

FAMILIES = ("gaussian_power", "bessel_damped", "annulus_bump")


def manufactured_case(kind: OperatorKind, n: int, family: str,
                      grid: RadialGrid, **params):
    """(u_exact, f = L u_exact) as mode functions, f in closed form.

    gaussian_power: u = r^a e^{-r^2}; the default a (mode order) cancels the
    singular r^{a-2} term exactly.  bessel_damped: u = K_nu(r) e^{-(c/r)^2}.
    annulus_bump: C^2 polynomial bump supported on [r1, r2].
    """
    if family not in FAMILIES:
        raise UnknownFamily(f"family must be one of {FAMILIES}, got {family!r}")
    r = grid.nodes
    n = abs(int(n))
    if family == "gaussian_power":
        a = float(params.get("a", mode_order(kind, n)))
        e = np.exp(-r * r)
        u = r ** a * e
        lap = e * ((a * a - n * n) * r ** (a - 2.0)
                   - (4.0 * a + 4.0) * r ** a + 4.0 * r ** (a + 2.0))
    elif family == "bessel_damped":
        nu = mode_order(kind, n)
        c = float(params.get("c", 1.0))
        kv = np.asarray(bessel.bessel_k(nu, r))
        kvp = np.asarray(bessel.bessel_k_prime(nu, r))
        chi = np.exp(-((c / r) ** 2))
        chi_p = 2.0 * c * c / r ** 3 * chi
        chi_pp = (4.0 * c ** 4 / r ** 6 - 6.0 * c * c / r ** 4) * chi
        u = kv * chi
        # lap_n(K chi) = chi lap_n K + 2 K' chi' + K (chi'' + chi'/r);
        # lap_n K_nu = (1 + (nu^2 - n^2)/r^2) K_nu for the Bessel profile
        lap = (chi * (1.0 + (nu * nu - n * n) / r ** 2) * kv
               + 2.0 * kvp * chi_p + kv * (chi_pp + chi_p / r))
    else:
        r1 = float(params.get("r1", 1.0))
        r2 = float(params.get("r2", 2.0))
        wdt = r2 - r1
        t = np.clip((r - r1) / wdt, 0.0, 1.0)
        u = 64.0 * t ** 3 * (1.0 - t) ** 3
        up = 192.0 * t ** 2 * (1.0 - t) ** 2 * (1.0 - 2.0 * t) / wdt
        upp = 384.0 * t * (1.0 - t) * (1.0 - 5.0 * t + 5.0 * t * t) / wdt ** 2
        inside = (r > r1) & (r < r2)
        up = np.where(inside, up, 0.0)
        upp = np.where(inside, upp, 0.0)
        u = np.where(inside, u, 0.0)
        lap = upp + up / r - n * n * u / r ** 2
    if kind == OperatorKind.HELMHOLTZ:
        f = lap - u
    elif kind == OperatorKind.SHIFTED_HELMHOLTZ:
        f = lap - u / r ** 2 - u
    else:
        f = lap - u / r ** 2
    return (ModeFunction(n, u.astype(np.complex128), grid),
            ModeFunction(n, f.astype(np.complex128), grid))


def mode_field(m: ModeFunction, n_theta: int = 64, parity: str = "cos") -> Field2D:
    """Real field carrying the mode profile: g(r) cos/sin(n theta)."""
    field = Field2D.zeros(m.grid, n_theta)
    if m.n == 0:
        field.set_mode(0, m.values)
        return field
    if parity == "cos":
        field.set_mode(m.n, 0.5 * m.values)
        field.set_mode(-m.n, 0.5 * np.conj(m.values))
    else:
        field.set_mode(m.n, -0.5j * m.values)
        field.set_mode(-m.n, 0.5j * np.conj(m.values))
    return field


def _field_order_sums(u: Field2D):
    parts = None
    for n, values in u.iter_modes():
        term = geometry.order_integrands(values, n, u.grid)
        parts = term if parts is None else [a + b for a, b in zip(parts, term)]
    return parts


def interpolation_ratio(u: Field2D, w: WeightPair) -> float:
    """||D^2 u||_{sigma+2,gamma+2} / (||lap u||_{sigma+2,gamma+2} +
    ||D u||_{sigma+1,gamma+1}); bounded over smooth compact fields."""
    grid = u.grid
    parts = _field_order_sums(u)
    lap_sq = np.zeros(grid.n_r)
    for n, values in u.iter_modes():
        lap_sq += np.abs(laplacian_mode(ModeFunction(n, values, grid)).values) ** 2
    num = geometry.order_term_norm(parts[2], grid, w.sigma + 2.0, w.gamma + 2.0)
    den = (geometry.order_term_norm(lap_sq, grid, w.sigma + 2.0, w.gamma + 2.0)
           + geometry.order_term_norm(parts[1], grid, w.sigma + 1.0, w.gamma + 1.0))
    if den == 0.0:
        if num == 0.0:
            raise ZeroDenominator("ratio undefined for the zero field")
        return math.inf
    return num / den


def helmholtz_apriori_ratio(u: Field2D, w: WeightPair) -> float:
    """||u||_{H2_{sigma,gamma}} / (||(lap-1)u||_{L2_{sigma+2,gamma}} +
    ||u||_{L2_{sigma,gamma}})."""
    grid = u.grid
    img_sq = np.zeros(grid.n_r)
    for n, values in u.iter_modes():
        m = ModeFunction(n, values, grid)
        lap = laplacian_mode(m).values - m.values
        img_sq += np.abs(lap) ** 2
    num = geometry.weighted_norm(u, SpaceKind("H", 2), w)
    den = (geometry.order_term_norm(img_sq, grid, w.sigma + 2.0, w.gamma)
           + geometry.weighted_norm(u, SpaceKind("H", 0), w))
    if den == 0.0:
        if num == 0.0:
            raise ZeroDenominator("ratio undefined for the zero field")
        return math.inf
    return num / den


def random_band_limited(grid: RadialGrid, n_theta: int, seed: int,
                        mode_max: int = 8) -> Field2D:
    """Real band-limited field: per-mode Gaussian bumps in tau with
    seeded centers, widths and amplitudes; used as a reproducible corpus."""
    rng = np.random.default_rng(seed)
    field = Field2D.zeros(grid, n_theta)
    mode_max = min(mode_max, field.max_mode)
    tau = grid.tau
    for n in range(mode_max + 1):
        center = rng.uniform(-2.0, 2.0)
        width = rng.uniform(0.4, 1.2)
        re = rng.normal()
        im = rng.normal() if n > 0 else 0.0
        prof = (re + 1j * im) * np.exp(-(((tau - center) / width) ** 2))
        field.set_mode(n, prof)
        if n > 0:
            field.set_mode(-n, np.conj(prof))
    return field


def project_range(f: Field2D, kind: OperatorKind, w: WeightPair) -> Field2D:
    """Remove the cokernel components so f sits in the range.

    The cokernel representatives are not mutually orthogonal (two power
    profiles can share a mode), so the coefficients come from the Gram
    system, not from one-by-one projections.
    """
    report = classify(kind, w)
    elems = report.cokernel_basis
    if not elems:
        return f.copy()
    fields = [fredholm.element_field(e, f.grid, f.n_theta) for e in elems]
    gram = np.array([[fredholm.pairing(hi, ej) for ej in elems] for hi in fields])
    rhs = np.array([fredholm.pairing(f, e) for e in elems])
    coeffs = np.linalg.solve(gram, rhs)
    out = f.copy()
    for c, h in zip(coeffs, fields):
        out = out - c * h
    return out


def bound_constant_estimate(kind: OperatorKind, w: WeightPair,
                            sample_count: int, grid: RadialGrid,
                            n_theta: int = 32, seed: int = 20240901,
                            mode_max: int = 8):
    """Empirical solution-operator norm over seeded right-hand sides.

    Returns (estimate, envelope): the max of ||u||_domain / ||f||_range over
    the sample set (cokernel components projected out of f, kernel components
    out of u), and the theoretical envelope max(1/|gamma|, 1/(sigma+2)) where
    one exists (the equidimensional operator), else None.
    """
    report = classify(kind, w)
    if report.status == "resonant":
        raise ResonantWeight("empirical operator norm undefined at resonance")
    best = 0.0
    for i in range(sample_count):
        f = random_band_limited(grid, n_theta, seed + i, mode_max=mode_max)
        f = project_range(f, kind, w)
        result = greens.solve_field(kind, f, w)
        ratio = result.norms["solution_domain"] / result.norms["rhs_range"]
        best = max(best, ratio)
    envelope = None
    if kind == OperatorKind.EULER:
        parts = []
        if w.gamma != 0.0:
            parts.append(1.0 / abs(w.gamma))
        if w.sigma + 2.0 > 0.0:
            parts.append(1.0 / (w.sigma + 2.0))
        envelope = max(parts) if parts else None
    return best, envelope


# ---------------------------------------------------------------------------
# named verification suites (the CLI surface); every check is deterministic

def _suite_bessel():
    orders = [0.0, 1.0, 2.0, 5.0, math.sqrt(2.0), math.sqrt(5.0), math.sqrt(26.0)]
    zs = np.logspace(-3, math.log10(30.0), 200)
    checks = []
    worst = max(float(np.max(bessel.wronskian_residual(nu, zs))) for nu in orders)
    checks.append(_check("wronskian_residual_max", worst, 1e-10))
    z0, z1 = 1e-4, 40.0
    for nu in (1.0,):
        small_i = bessel.bessel_i(nu, z0) / ((z0 / 2.0) ** nu / math.gamma(nu + 1.0))
        small_k = bessel.bessel_k(nu, z0) / (0.5 * math.gamma(nu) * (z0 / 2.0) ** (-nu))
        big_i = bessel.bessel_i(nu, z1) / (math.exp(z1) / math.sqrt(2.0 * math.pi * z1))
        big_k = bessel.bessel_k(nu, z1) / (math.sqrt(math.pi / (2.0 * z1)) * math.exp(-z1))
        for name, val in (("i_small", small_i), ("k_small", small_k),
                          ("i_large", big_i), ("k_large", big_k)):
            checks.append(_check(f"asymptotic_{name}_nu{nu:g}", abs(val - 1.0), 0.01))
    # monotonicity on a sample grid
    kv = np.asarray(bessel.bessel_k(2.0, zs))
    iv = np.asarray(bessel.bessel_i(2.0, zs))
    checks.append(_check("k_decreasing", float(np.max(np.diff(kv))), 0.0))
    checks.append(_check("i_increasing", float(-np.min(np.diff(iv))), 0.0))
    return checks


def _check(name, value, bound):
    return {"name": name, "value": float(value), "bound": float(bound),
            "passed": bool(value <= bound)}


def _suite_green(grid: RadialGrid):
    checks = []
    weights = {
        OperatorKind.HELMHOLTZ: WeightPair(-0.5, 0.0),
        OperatorKind.SHIFTED_HELMHOLTZ: WeightPair(-0.5, 0.0),
        OperatorKind.EULER: WeightPair(-0.5, -0.5),
    }
    for kind in OperatorKind:
        w = weights[kind]
        fam = "M" if kind == OperatorKind.EULER else "H"
        for n in (0, 1, 2):
            u_exact, f = manufactured_case(kind, n, "gaussian_power", grid)
            u = greens.solve_mode(kind, n, f, w)
            err = _mode_rel_err(u, u_exact, kind, w, fam)
            checks.append(_check(f"recovery_{kind.value}_n{n}", err, 1e-4))
    return checks


def _mode_rel_err(u, u_exact, kind, w, fam):
    grid = u.grid
    diff = ModeFunction(u.n, u.values - u_exact.values, grid)
    space = SpaceKind(fam, 2)
    du = geometry.weighted_norm(diff, space, w)
    base = geometry.weighted_norm(u_exact, space, w)
    # quotient by the mode kernel where there is one
    report = classify(kind, w)
    for elem in report.kernel_basis:
        if elem.mode == abs(u.n) and elem.parity == "cos":
            g = fredholm.radial_profile(elem, grid)
            gg = geometry.radial_integral(g * g, grid)
            c = geometry.radial_integral(diff.values * g, grid) / gg
            proj = ModeFunction(u.n, diff.values - c * g, grid)
            du = min(du, geometry.weighted_norm(proj, space, w))
    return du / base


def _suite_classify():
    checks = []
    table = [(-3.5, 0, 5), (-2.5, 0, 3), (-1.5, 0, 1), (-0.5, 1, 0),
             (0.5, 3, 0), (1.5, 5, 0), (2.5, 7, 0)]
    for sigma, nk, nc in table:
        rep = classify(OperatorKind.HELMHOLTZ, WeightPair(sigma, 0.0))
        ok = (len(rep.kernel_basis), len(rep.cokernel_basis)) == (nk, nc)
        checks.append({"name": f"helmholtz_sigma_{sigma}", "value": ok,
                       "bound": True, "passed": bool(ok)})
    euler_table = [
        ((-0.5, -0.5), 0, 0), ((1.0, 1.0), 3, 3), ((1.0, -0.7), 3, 0),
        ((-0.5, -2.2), 1, 0), ((-2.5, 0.3), 0, 4), ((-2.5, -2.2), 1, 3),
        ((1.0, 0.3), 3, 1),
    ]
    for (sigma, gamma), nk, nc in euler_table:
        rep = classify(OperatorKind.EULER, WeightPair(sigma, gamma))
        ok = (len(rep.kernel_basis), len(rep.cokernel_basis)) == (nk, nc)
        checks.append({"name": f"euler_{sigma}_{gamma}", "value": ok,
                       "bound": True, "passed": bool(ok)})
    rep = classify(OperatorKind.EULER, WeightPair(math.sqrt(2.0) - 1.0, 0.3))
    ok = rep.status == "resonant" and rep.resonant_modes == [1]
    checks.append({"name": "euler_resonant_q1", "value": ok, "bound": True,
                   "passed": bool(ok)})
    return checks


def _suite_weyl():
    q1 = math.sqrt(2.0)
    js = [1.0, 2.0, 4.0, 8.0]
    grid = weyl.suggested_grid(OperatorKind.EULER, "interior", 8.0)
    res = weyl.ratio_sequence(OperatorKind.EULER, 1, "interior",
                              WeightPair(q1 - 1.0, 0.3), js, grid, branch=1)
    ctl = weyl.ratio_sequence(OperatorKind.EULER, 1, "interior",
                              WeightPair(-2.0, 0.3), js, grid, branch=1)
    checks = [_check(f"halving_j{int(js[i])}", res[i + 1] / res[i], 0.7)
              for i in range(3)]
    checks.append(_check("control_floor", 10.0 * res[-1] / min(ctl), 1.0))
    return checks


def _suite_lemmas(grid: RadialGrid, count: int = 12):
    checks = []
    pairs = [WeightPair(0.0, 0.0), WeightPair(-1.5, 2.0), WeightPair(1.0, -1.0)]
    fine = grid.refined()
    for w in pairs:
        vals, vals_fine = [], []
        for i in range(count):
            f = random_band_limited(grid, 32, 515 + i)
            vals.append(interpolation_ratio(f, w))
            f2 = random_band_limited(fine, 32, 515 + i)
            vals_fine.append(interpolation_ratio(f2, w))
        drift = abs(max(vals_fine) - max(vals)) / max(vals)
        checks.append(_check(f"interp_stability_{w.sigma}_{w.gamma}", drift, 0.05))
    w = pairs[0]
    vals = [helmholtz_apriori_ratio(random_band_limited(grid, 32, 99 + i), w)
            for i in range(count)]
    checks.append(_check("apriori_bounded", max(vals), 10.0))
    return checks


SUITES = ("bessel", "green", "classify", "weyl", "lemmas")


def run_suite(name: str, grid: RadialGrid | None = None) -> dict:
    """Run one named suite (or 'all'); returns a JSON-ready report."""
    if grid is None:
        grid = RadialGrid()
    if name == "all":
        suites = [run_suite(s, grid) for s in SUITES]
        return {"suite": "all", "passed": all(s["passed"] for s in suites),
                "suites": suites}
    if name == "bessel":
        checks = _suite_bessel()
    elif name == "green":
        checks = _suite_green(grid)
    elif name == "classify":
        checks = _suite_classify()
    elif name == "weyl":
        checks = _suite_weyl()
    elif name == "lemmas":
        checks = _suite_lemmas(grid)
    else:
        raise ValueError(f"unknown suite {name!r}")
    return {"suite": name, "passed": all(c["passed"] for c in checks),
            "checks": checks}
