"""Command-line entry point.

Subcommands: classify, solve, kernel, weyl, verify, bessel.  Reports are
deterministic JSON (sorted keys, no timestamps); run metadata goes to a
separate ``<out>.meta.json``.  Profile CSVs use columns mode,r,re,im with a
'.' decimal point.

Exit codes: 0 ok, 1 usage error, 2 resonant weight, 3 solvability violated,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time

import numpy as np

import fredholm_disk
from fredholm_disk import backend, bessel, fredholm, geometry, greens, verify, weyl
from fredholm_disk.errors import FredholmDiskError, ResonantWeight
from fredholm_disk.fredholm import classify
from fredholm_disk.geometry import RadialGrid, WeightPair
from fredholm_disk.modes import Field2D, OperatorKind

SCHEMA = "fredholm-disk/1"
DEFAULT_GRID = {"r_min": 1e-4, "r_max": 40.0, "n_r": 1024, "n_theta": 64}

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RESONANT = 2
EXIT_SOLVABILITY = 3
EXIT_NUMERICAL = 4


def _grid_from_args(args) -> tuple[RadialGrid, int]:
    cfg = dict(DEFAULT_GRID)
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            cfg.update(json.load(fh))
    for key in DEFAULT_GRID:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return RadialGrid(cfg["r_min"], cfg["r_max"], int(cfg["n_r"])), int(cfg["n_theta"])


def _write_report(path, payload) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        meta = {
            "version": fredholm_disk.__version__,
            "backend": backend.active_name(),
            "written_at": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        }
        with open(path + ".meta.json", "w", encoding="utf-8") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        sys.stdout.write(text)


def _element_json(elem) -> dict:
    return {
        "mode": elem.mode,
        "parity": elem.parity,
        "radial_form": {"type": elem.radial.kind, "param": elem.radial.param},
    }


def _report_json(report) -> dict:
    return {
        "schema": SCHEMA,
        "op": report.kind.value,
        "sigma": report.weights.sigma,
        "gamma": report.weights.gamma,
        "status": report.status,
        "index": report.index,
        "kernel": [_element_json(e) for e in report.kernel_basis],
        "cokernel": [_element_json(e) for e in report.cokernel_basis],
        "resonant_modes": report.resonant_modes,
    }


def _write_profiles(path, field: Field2D) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["mode", "r", "re", "im"])
        for n, values in field.iter_modes():
            if not np.any(values):
                continue
            for r, v in zip(field.grid.nodes, values):
                writer.writerow([n, repr(float(r)),
                                 repr(float(v.real)), repr(float(v.imag))])


def _read_profiles(path, grid: RadialGrid, n_theta: int) -> Field2D:
    by_mode: dict[int, list[complex]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            by_mode.setdefault(int(row["mode"]), []).append(
                complex(float(row["re"]), float(row["im"])))
    field = Field2D.zeros(grid, n_theta)
    for n, vals in by_mode.items():
        field.set_mode(n, np.asarray(vals))
    return field


def _rhs_field(spec: str, kind: OperatorKind, grid: RadialGrid, n_theta: int):
    """Returns (field, exact_field_or_None) for an rhs specification."""
    if spec.startswith("manufactured:"):
        parts = spec.split(":")
        family = parts[1]
        params = {}
        for item in parts[2:]:
            key, _, val = item.partition("=")
            params[key] = val
        n = int(params.pop("n", 0))
        params = {k: float(v) for k, v in params.items()}
        u, f = verify.manufactured_case(kind, n, family, grid, **params)
        return verify.mode_field(f, n_theta), verify.mode_field(u, n_theta)
    if spec.startswith("csv:"):
        spec = spec[4:]
    return _read_profiles(spec, grid, n_theta), None


def _cmd_classify(args) -> int:
    report = classify(OperatorKind.parse(args.op), WeightPair(args.sigma, args.gamma))
    _write_report(args.out, _report_json(report))
    print(f"classify {args.op}: status={report.status} index={report.index} "
          f"kernel={len(report.kernel_basis)} cokernel={len(report.cokernel_basis)}")
    return EXIT_RESONANT if report.status == "resonant" else EXIT_OK


def _cmd_solve(args) -> int:
    kind = OperatorKind.parse(args.op)
    w = WeightPair(args.sigma, args.gamma)
    grid, n_theta = _grid_from_args(args)
    f, u_exact = _rhs_field(args.rhs, kind, grid, n_theta)
    result = greens.solve_field(kind, f, w)
    payload = {
        "schema": SCHEMA,
        "op": kind.value,
        "sigma": w.sigma,
        "gamma": w.gamma,
        "rhs": args.rhs,
        "grid": {"r_min": grid.r_min, "r_max": grid.r_max,
                 "n_r": grid.n_r, "n_theta": n_theta},
        "residual": result.residual_norm,
        "norms": result.norms,
        "defects": [{"element": _element_json(e), "pairing": p}
                    for e, p in result.solvability_defects],
        "solvability_violated": result.violated,
    }
    if u_exact is not None:
        space = geometry.SpaceKind("M" if kind == OperatorKind.EULER else "H", 2)
        diff = result.solution - u_exact
        greens.project_out_kernel(diff, result.report)
        num = geometry.weighted_norm(diff, space, w)
        den = geometry.weighted_norm(u_exact, space, w)
        payload["manufactured_error"] = num / den if den else 0.0
    _write_report(args.out, payload)
    if args.profiles:
        _write_profiles(args.profiles, result.solution)
    print(f"solve {kind.value}: residual={result.residual_norm:.3e} "
          f"defects={len(result.solvability_defects)} "
          f"violated={result.violated}")
    return EXIT_SOLVABILITY if result.violated else EXIT_OK


def _cmd_kernel(args) -> int:
    kind = OperatorKind.parse(args.op)
    w = WeightPair(args.sigma, args.gamma)
    grid, n_theta = _grid_from_args(args)
    report = classify(kind, w)
    if report.status == "resonant":
        raise ResonantWeight(f"resonant weights; modes {report.resonant_modes}")
    payload = _report_json(report)
    _write_report(args.out, payload)
    if args.profiles:
        fields = (fredholm.kernel_basis_field(report, grid, n_theta)
                  + fredholm.cokernel_basis_field(report, grid, n_theta))
        elems = report.kernel_basis + report.cokernel_basis
        with open(args.profiles, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["element", "side", "mode", "r", "re", "im"])
            for idx, (elem, field) in enumerate(zip(elems, fields)):
                for n, values in field.iter_modes():
                    if not np.any(values):
                        continue
                    for r, v in zip(grid.nodes, values):
                        writer.writerow([idx, elem.side, n, repr(float(r)),
                                         repr(float(v.real)), repr(float(v.imag))])
    print(f"kernel {kind.value}: kernel={len(report.kernel_basis)} "
          f"cokernel={len(report.cokernel_basis)} index={report.index}")
    return EXIT_OK


def _cmd_weyl(args) -> int:
    kind = OperatorKind.parse(args.op)
    w = WeightPair(args.sigma, args.gamma)
    js = [float(2 ** k) for k in range(int(math.log2(args.jmax)) + 1)]
    ratios = weyl.ratio_sequence(kind, args.mode, args.side, w, js)
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["j", "ratio"])
            for j, ratio in zip(js, ratios):
                writer.writerow([repr(j), repr(ratio)])
    pairs = " ".join(f"j={j:g}:{r_:.3e}" for j, r_ in zip(js, ratios))
    print(f"weyl {kind.value} mode={args.mode} {args.side}: {pairs}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    grid, _ = _grid_from_args(args)
    report = verify.run_suite(args.suite, grid)
    payload = {"schema": SCHEMA, "report": report}
    _write_report(args.out, payload)
    print(f"verify {args.suite}: {'pass' if report['passed'] else 'FAIL'}")
    return EXIT_OK if report["passed"] else EXIT_NUMERICAL


def _cmd_bessel(args) -> int:
    vals = {
        "i": bessel.bessel_i(args.order, args.z, scaled=args.scaled),
        "k": bessel.bessel_k(args.order, args.z, scaled=args.scaled),
        "iprime": bessel.bessel_i_prime(args.order, args.z, scaled=args.scaled),
        "kprime": bessel.bessel_k_prime(args.order, args.z, scaled=args.scaled),
    }
    for name, val in vals.items():
        print(f"{name}={val!r}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fredholm-disk",
        description="Mode solvers and weight-regime classification for "
                    "singular radial operators on the plane")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_weights(p):
        p.add_argument("--op", required=True,
                       choices=[k.value for k in OperatorKind])
        p.add_argument("--sigma", type=float, required=True)
        p.add_argument("--gamma", type=float, required=True)

    def add_grid(p):
        p.add_argument("--config", help="JSON file overriding grid defaults")
        p.add_argument("--r-min", dest="r_min", type=float)
        p.add_argument("--r-max", dest="r_max", type=float)
        p.add_argument("--n-r", dest="n_r", type=int)
        p.add_argument("--n-theta", dest="n_theta", type=int)

    p = sub.add_parser("classify", help="weight-regime classification")
    add_weights(p)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("solve", help="solve L u = f mode-wise")
    add_weights(p)
    add_grid(p)
    p.add_argument("--rhs", required=True,
                   help="manufactured:FAMILY:n=N[:a=A] or csv:PATH")
    p.add_argument("--out")
    p.add_argument("--profiles", help="CSV output of the solution modes")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("kernel", help="sampled kernel/cokernel bases")
    add_weights(p)
    add_grid(p)
    p.add_argument("--out")
    p.add_argument("--profiles")
    p.set_defaults(func=_cmd_kernel)

    p = sub.add_parser("weyl", help="near-kernel ratio sequences")
    add_weights(p)
    p.add_argument("--mode", type=int, required=True)
    p.add_argument("--side", choices=["interior", "exterior"], required=True)
    p.add_argument("--jmax", type=int, default=8)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_weyl)

    p = sub.add_parser("verify", help="run a verification suite")
    add_grid(p)
    p.add_argument("--suite", required=True,
                   choices=list(verify.SUITES) + ["all"])
    p.add_argument("--out")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bessel", help="print modified Bessel values")
    p.add_argument("--order", type=float, required=True)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--scaled", action="store_true")
    p.set_defaults(func=_cmd_bessel)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except ResonantWeight as exc:
        print(json.dumps({"error": "resonant_weight", "detail": str(exc)}),
              file=sys.stderr)
        return EXIT_RESONANT
    except FredholmDiskError as exc:
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
              file=sys.stderr)
        return EXIT_NUMERICAL
    except (OSError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
              file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
