"""Acceptance suite: every release criterion at its stated tolerance.

Each test prints one `[acceptance] criterion N: PASS/FAIL` line (visible
under `pytest -s` or on failure) and asserts the criterion.
"""

import math

import numpy as np

from fredholm_disk import bessel, cli, fredholm, geometry, greens, verify, weyl
from fredholm_disk.fredholm import classify, range_weights
from fredholm_disk.geometry import (
    RadialGrid,
    SpaceKind,
    WeightPair,
    weighted_norm,
)
from fredholm_disk.modes import (
    Field2D,
    ModeFunction,
    OperatorKind,
    apply_operator,
)

SQRT2 = math.sqrt(2.0)
ORDERS = [0.0, 1.0, 2.0, 5.0, SQRT2, math.sqrt(5.0), math.sqrt(26.0)]


def _report(criterion: str, ok: bool, detail: str):
    print(f"[acceptance] criterion {criterion}: "
          f"{'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {criterion}: {detail}"


def test_criterion_1_special_functions():
    zs = np.logspace(-3.0, math.log10(30.0), 200)
    worst = max(float(np.max(bessel.wronskian_residual(nu, zs)))
                for nu in ORDERS)
    _report("1a (Wronskian residual)", worst <= 1e-10, f"max residual {worst:.2e}")

    devs = []
    z0 = 1e-4
    for nu in ORDERS:
        devs.append(abs(bessel.bessel_i(nu, z0)
                        * math.gamma(nu + 1.0) / (z0 / 2.0) ** nu - 1.0))
        if nu >= 1.0:
            devs.append(abs(bessel.bessel_k(nu, z0)
                            / (0.5 * math.gamma(nu) * (z0 / 2.0) ** (-nu)) - 1.0))
    # the order-zero K follows the logarithmic form
    devs.append(abs(bessel.bessel_k(0.0, 1e-6) / (-math.log(1e-6)) - 1.0))
    z1 = 40.0
    for nu in (0.0, 1.0):
        devs.append(abs(bessel.bessel_i(nu, z1)
                        / (math.exp(z1) / math.sqrt(2.0 * math.pi * z1)) - 1.0))
        devs.append(abs(bessel.bessel_k(nu, z1)
                        / (math.sqrt(math.pi / (2.0 * z1)) * math.exp(-z1)) - 1.0))
    worst_dev = max(devs)
    _report("1b (asymptotic-form ratios)", worst_dev <= 0.01,
            f"max |ratio-1| = {worst_dev:.4f}")


KERNEL_REGIMES = [
    (OperatorKind.HELMHOLTZ, WeightPair(0.5, 7.0)),
    (OperatorKind.HELMHOLTZ, WeightPair(1.5, 0.0)),
    (OperatorKind.SHIFTED_HELMHOLTZ, WeightPair(0.2, 0.0)),
    (OperatorKind.SHIFTED_HELMHOLTZ, WeightPair(1.5, 0.0)),
    (OperatorKind.EULER, WeightPair(1.0, -0.7)),
    (OperatorKind.EULER, WeightPair(-0.5, -2.2)),
]


def test_criterion_2_kernel_annihilation(default_grid):
    worst = 0.0
    count = 0
    for kind, w in KERNEL_REGIMES:
        rep = classify(kind, w)
        rw = range_weights(kind, w)
        fields = fredholm.kernel_basis_field(rep, default_grid, 16)
        assert fields, (kind, w)
        for field in fields:
            img = apply_operator(kind, field)
            tot = np.zeros(default_grid.n_r)
            for _, values in img.iter_modes():
                tot += np.abs(values) ** 2
            resid = geometry.order_term_norm(
                tot, default_grid, rw.sigma, rw.gamma, default_grid.interior)
            worst = max(worst, resid)
            count += 1
    _report("2 (kernel annihilation)", worst <= 1e-6,
            f"{count} elements over 6 regimes, worst residual {worst:.2e}")


SOLVE_WEIGHTS = {
    OperatorKind.HELMHOLTZ: WeightPair(-0.5, 0.0),
    OperatorKind.SHIFTED_HELMHOLTZ: WeightPair(-0.5, 0.0),
    OperatorKind.EULER: WeightPair(-0.5, -0.5),
}


def _recovery_error(kind, n, grid):
    w = SOLVE_WEIGHTS[kind]
    family = "M" if kind == OperatorKind.EULER else "H"
    u_exact, f = verify.manufactured_case(kind, n, "gaussian_power", grid)
    u = greens.solve_mode(kind, n, f, w)
    space = SpaceKind(family, 2)
    diff = ModeFunction(n, u.values - u_exact.values, grid)
    err = weighted_norm(diff, space, w)
    for elem in classify(kind, w).kernel_basis:
        if elem.mode == abs(n) and elem.parity == "cos":
            g = fredholm.radial_profile(elem, grid)
            c = geometry.radial_integral(diff.values * g, grid) \
                / geometry.radial_integral(g * g, grid)
            err = min(err, weighted_norm(
                ModeFunction(n, diff.values - c * g, grid), space, w))
    return err / weighted_norm(u_exact, space, w)


def test_criterion_3_greens_inverse(default_grid):
    worst_err = 0.0
    worst_order = math.inf
    for kind in OperatorKind:
        for n in (0, 1, 2, 5):
            errs = [_recovery_error(kind, n, RadialGrid(1e-4, 40.0, n_r))
                    for n_r in (1024, 2047, 4093)]
            worst_err = max(worst_err, errs[0])
            orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
            worst_order = min(worst_order, min(orders))
    ok = worst_err <= 1e-4 and worst_order >= 2.0
    _report("3 (manufactured recovery)", ok,
            f"worst error {worst_err:.2e}, worst observed order {worst_order:.2f}")


def test_criterion_4_classification_table():
    helm = {-3.5: (0, 5), -2.5: (0, 3), -1.5: (0, 1), -0.5: (1, 0),
            0.5: (3, 0), 1.5: (5, 0), 2.5: (7, 0)}
    ok = True
    notes = []
    prev_index = None
    for sigma in sorted(helm):
        rep = classify(OperatorKind.HELMHOLTZ, WeightPair(sigma, 0.0))
        dims = (len(rep.kernel_basis), len(rep.cokernel_basis))
        if dims != helm[sigma] or rep.index != dims[0] - dims[1]:
            ok = False
            notes.append(f"helm sigma={sigma}: {dims}")
        if prev_index is not None and rep.index - prev_index != 2:
            ok = False
            notes.append(f"helm index step at sigma={sigma}")
        prev_index = rep.index
    euler = {(-0.5, -0.5): (0, 0), (1.0, 1.0): (3, 3), (1.0, -0.7): (3, 0),
             (-0.5, -2.2): (1, 0), (-2.5, 0.3): (0, 4), (-2.5, -2.2): (1, 3),
             (1.0, 0.3): (3, 1)}
    for (sigma, gamma), dims in euler.items():
        rep = classify(OperatorKind.EULER, WeightPair(sigma, gamma))
        got = (len(rep.kernel_basis), len(rep.cokernel_basis))
        if rep.status != "fredholm" or got != dims:
            ok = False
            notes.append(f"euler ({sigma},{gamma}): {got}")
    rep = classify(OperatorKind.EULER, WeightPair(SQRT2 - 1.0, 0.3))
    if rep.status != "resonant" or rep.resonant_modes != [1]:
        ok = False
        notes.append("euler resonant sample")
    _report("4 (classification tables)", ok,
            "helm 7 values + euler 8 samples" + ("; ".join(notes) if notes else ""))


def test_criterion_5_solvability(default_grid):
    w = WeightPair(-2.5, 0.3)
    rep = classify(OperatorKind.EULER, w)
    elem = rep.cokernel_basis[0]  # the r^{q(0)} representative
    field = fredholm.cokernel_basis_field(rep, default_grid, 16)[0]
    res = greens.solve_field(OperatorKind.EULER, field, w)
    got = dict((e.label(), p) for e, p in res.solvability_defects)[elem.label()]
    # independent direct quadrature of <f, r cos(0 theta)>
    g = default_grid.nodes ** elem.radial.param
    want = 2.0 * math.pi * float(np.trapezoid(
        field.mode(0).values.real * g * default_grid.nodes ** 2,
        dx=default_grid.h))
    rel = abs(got - want) / abs(want)
    ok1 = rel <= 1e-8 and res.violated

    mixed = Field2D.zeros(default_grid, 16)
    tau = default_grid.tau
    mixed.set_mode(0, np.exp(-((tau - 0.5) / 0.8) ** 2) + 0j)
    prof1 = 0.7 * np.exp(-((tau + 0.3) / 0.6) ** 2)
    mixed.set_mode(1, prof1 + 0j)
    mixed.set_mode(-1, prof1 + 0j)
    projected = verify.project_range(mixed, OperatorKind.EULER, w)
    res2 = greens.solve_field(OperatorKind.EULER, projected, w)
    ok2 = (not res2.violated) and res2.residual_norm <= 1e-4
    _report("5 (solvability defects)", ok1 and ok2,
            f"pairing rel dev {rel:.1e}, projected residual "
            f"{res2.residual_norm:.2e}")


def test_criterion_6_resonance_behaviour(default_grid):
    gammas = (-0.4, -0.2, -0.1, -0.05)
    ests = [verify.bound_constant_estimate(
        OperatorKind.EULER, WeightPair(-0.5, g), 20, default_grid)[0]
        for g in gammas]
    ok1 = all(a < b for a, b in zip(ests, ests[1:]))

    js = [1.0, 2.0, 4.0, 8.0]
    grid = weyl.suggested_grid(OperatorKind.EULER, "interior", 8.0)
    res = weyl.ratio_sequence(OperatorKind.EULER, 1, "interior",
                              WeightPair(SQRT2 - 1.0, 0.3), js, grid, branch=1)
    halvings = [res[i + 1] / res[i] for i in range(3)]
    ctl = weyl.ratio_sequence(OperatorKind.EULER, 1, "interior",
                              WeightPair(-2.0, 0.3), js, grid, branch=1)
    ok2 = max(halvings) <= 0.7 and min(ctl) >= 10.0 * res[-1]
    _report("6 (resonance behaviour)", ok1 and ok2,
            f"estimates {['%.3f' % e for e in ests]}, halvings "
            f"{['%.2f' % h for h in halvings]}, control x"
            f"{min(ctl) / res[-1]:.1f}")


def test_criterion_7_inequality_ratio_stability():
    base = RadialGrid(1e-4, 40.0, 1024)
    fine = base.refined()
    pairs = [WeightPair(0.0, 0.0), WeightPair(-1.5, 2.0), WeightPair(1.0, -1.0)]
    worst = 0.0
    for w in pairs:
        for fn in (verify.interpolation_ratio, verify.helmholtz_apriori_ratio):
            coarse_max = max(fn(verify.random_band_limited(base, 16, 2000 + i), w)
                             for i in range(50))
            fine_max = max(fn(verify.random_band_limited(fine, 16, 2000 + i), w)
                           for i in range(50))
            worst = max(worst, abs(fine_max - coarse_max) / coarse_max)
    _report("7 (inequality-ratio stability)", worst <= 0.05,
            f"worst relative drift {worst:.3f} over 50 fields x 3 pairs")


def test_criterion_8_determinism(tmp_path):
    outs = []
    for tag in ("one", "two"):
        out = tmp_path / f"report_{tag}.json"
        code = cli.main(["verify", "--suite", "all", "--n-r", "512",
                         "--out", str(out)])
        assert code == 0
        outs.append(out.read_bytes())
    ok = outs[0] == outs[1]
    _report("8 (byte-identical verify reports)", ok,
            f"{len(outs[0])} bytes compared")
