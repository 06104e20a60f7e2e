"""Command-line surface: mass solutions, verification, rasters, boundaries,
simulations and the exact-versus-published comparison, all emitting CSV or
JSON suitable for plotting scripts.

Output is deterministic: identical invocations produce byte-identical
bytes (floats are rendered with their shortest round-trip representation,
files use UTF-8 with LF line endings, and no timestamps are recorded).

Exit codes: 0 success, 1 verification failed, 2 degenerate parameters,
3 collision abort, 64 usage error, 65 refused unphysical run, 74 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .dynamics import (
    CollisionError,
    UnphysicalParametersError,
    init_relative_equilibrium,
    integrate,
    rigidity_metrics,
)
from .geometry import TrapezoidParams, build_configuration, compute_distance_cubes
from .masses import (
    DegenerateConfigurationError,
    RegionLabel,
    classify,
    solve_masses,
)
from .oracle import is_central_configuration, trapezoid_system
from .regions import (
    audit_published_domains,
    compare_exact_vs_approx,
    f1_approx,
    f3_approx,
    raster,
    trace_boundary,
)

EX_OK = 0
EX_VERIFY_FAILED = 1
EX_DEGENERATE = 2
EX_COLLISION = 3
EX_USAGE = 64
EX_REFUSED = 65
EX_IO = 74

MASSES_CSV_HEADER = "alpha,beta,a,b,f1,f2,f3,m,M,lambda,r_A,r_B,label"
RASTER_CSV_HEADER = "alpha,beta,f1,f3,m,M,label"
BOUNDARY_CSV_HEADER = "fixed,root,f_value,method"
TRAJECTORY_CSV_HEADER = "t,x1,y1,x2,y2,x3,y3,x4,y4,energy,angmom"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse variant that exits 64 on bad flags instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def fnum(x) -> str:
    """Shortest round-trip decimal rendering of a float."""
    return repr(float(x))


def envelope(command: str, parameters: dict, payload, warnings: list[str]) -> dict:
    return {
        "tool": "trapcc",
        "version": __version__,
        "command": command,
        "parameters": parameters,
        "payload": payload,
        "warnings": warnings,
    }


def emit_json(doc: dict) -> None:
    print(json.dumps(doc, indent=2))


def write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as err:
        raise IOError(f"cannot write {path}: {err}") from err


def _parse_range(text: str, flag: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"{flag} expects LO,HI, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise UsageError(f"{flag} expects numbers, got {text!r}")
    if not hi > lo:
        raise UsageError(f"{flag} needs LO < HI, got {text!r}")
    return lo, hi


def _parse_resolution(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    try:
        values = [int(p) for p in parts]
    except ValueError:
        raise UsageError(f"--resolution expects N or NxM, got {text!r}")
    if len(values) == 1:
        values = [values[0], values[0]]
    if len(values) != 2 or values[0] < 1 or values[1] < 1:
        raise UsageError(f"--resolution must be positive, got {text!r}")
    return values[0], values[1]


def _params_or_usage(alpha: float, beta: float) -> TrapezoidParams:
    try:
        return TrapezoidParams(alpha=alpha, beta=beta)
    except ValueError as err:
        raise UsageError(str(err))


def cmd_masses(args) -> int:
    params = _params_or_usage(args.alpha, args.beta)
    try:
        solution = solve_masses(params)
    except DegenerateConfigurationError as err:
        print(f"degenerate: {err}", file=sys.stderr)
        return EX_DEGENERATE
    label = classify(params)
    config = build_configuration(params, solution.m, solution.M, strict=False)
    cubes = compute_distance_cubes(params)
    fields = {
        "alpha": params.alpha,
        "beta": params.beta,
        "a": cubes.a,
        "b": cubes.b,
        "f1": solution.signs.f1,
        "f2": solution.signs.f2,
        "f3": solution.signs.f3,
        "m": solution.m,
        "M": solution.M,
        "lambda": solution.lam,
        "r_A": config.r_A,
        "r_B": config.r_B,
    }
    if args.format == "csv":
        row = ",".join(fnum(fields[k]) for k in MASSES_CSV_HEADER.split(",")[:-1])
        print(MASSES_CSV_HEADER)
        print(f"{row},{label.value}")
    else:
        payload = dict(fields)
        payload["label"] = label.value
        emit_json(
            envelope("masses", {"alpha": params.alpha, "beta": params.beta}, payload, [])
        )
    return EX_OK


def cmd_verify(args) -> int:
    params = _params_or_usage(args.alpha, args.beta)
    try:
        solution = solve_masses(params)
    except DegenerateConfigurationError as err:
        print(f"degenerate: {err}", file=sys.stderr)
        return EX_DEGENERATE
    warnings = []
    if solution.m <= 0.0 or solution.M <= 0.0:
        warnings.append(
            f"NEGATIVE-MASS: m={fnum(solution.m)}, M={fnum(solution.M)}; "
            "the check is algebraic, not physical"
        )
    system = trapezoid_system(params, solution.m, solution.M)
    verdict, report = is_central_configuration(system, tol=args.tol)
    relative = (
        report.max_residual / report.attraction_scale
        if report.attraction_scale > 0.0
        else math.inf
    )
    payload = {
        "alpha": params.alpha,
        "beta": params.beta,
        "m": solution.m,
        "M": solution.M,
        "is_central_configuration": verdict,
        "tol": args.tol,
        "max_residual": report.max_residual,
        "attraction_scale": report.attraction_scale,
        "relative_residual": relative,
        "lambda_energy": report.lambda_energy,
        "lambda_per_body": list(report.lambda_per_body),
        "potential": report.potential,
        "moment": report.moment,
        "com": [report.com.x, report.com.y],
    }
    emit_json(
        envelope(
            "verify",
            {"alpha": params.alpha, "beta": params.beta, "tol": args.tol},
            payload,
            warnings,
        )
    )
    return EX_OK if verdict else EX_VERIFY_FAILED


def cmd_raster(args) -> int:
    alpha_range = _parse_range(args.alpha_range, "--alpha-range")
    beta_range = _parse_range(args.beta_range, "--beta-range")
    n_alpha, n_beta = _parse_resolution(args.resolution)
    try:
        grid = raster(alpha_range, beta_range, n_alpha, n_beta, workers=args.threads)
    except ValueError as err:
        raise UsageError(str(err))

    lines = [RASTER_CSV_HEADER]
    for i, beta in enumerate(grid.beta_axis):
        for j, alpha in enumerate(grid.alpha_axis):
            lines.append(
                ",".join(
                    (
                        fnum(alpha),
                        fnum(beta),
                        fnum(grid.f1[i, j]),
                        fnum(grid.f3[i, j]),
                        fnum(grid.m[i, j]),
                        fnum(grid.M[i, j]),
                        grid.labels[i, j].value,
                    )
                )
            )
    write_text(args.out, "\n".join(lines) + "\n")

    label_counts = {}
    for label in RegionLabel:
        count = int((grid.labels == label).sum())
        if count:
            label_counts[label.value] = count
    meta = envelope(
        "raster",
        {
            "alpha_range": list(alpha_range),
            "beta_range": list(beta_range),
            "n_alpha": n_alpha,
            "n_beta": n_beta,
            "out": args.out,
        },
        {"rows": n_alpha * n_beta, "label_counts": label_counts},
        [],
    )
    write_text(args.out + ".meta.json", json.dumps(meta, indent=2) + "\n")
    emit_json(meta)
    return EX_OK


def cmd_boundary(args) -> int:
    fixed_values = []
    if args.fixed:
        for chunk in args.fixed.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            try:
                fixed_values.append(float(chunk))
            except ValueError:
                raise UsageError(f"--fixed expects numbers, got {chunk!r}")
    search_interval = None
    if args.search_interval:
        search_interval = _parse_range(args.search_interval, "--search-interval")
    try:
        curve = trace_boundary(
            args.which, args.axis, fixed_values, method=args.method,
            search_interval=search_interval,
        )
    except ValueError as err:
        raise UsageError(str(err))

    lines = [BOUNDARY_CSV_HEADER]
    for sample in curve.samples:
        root = fnum(sample.root) if sample.root is not None else sample.status
        f_value = fnum(sample.f_value) if sample.f_value is not None else ""
        lines.append(f"{fnum(sample.fixed)},{root},{f_value},{curve.method}")
    write_text(args.out, "\n".join(lines) + "\n")
    emit_json(
        envelope(
            "boundary",
            {
                "which": args.which,
                "axis": args.axis,
                "fixed": fixed_values,
                "method": args.method,
                "out": args.out,
            },
            {"rows": len(curve.samples)},
            [],
        )
    )
    return EX_OK


def cmd_simulate(args) -> int:
    params = _params_or_usage(args.alpha, args.beta)
    if args.periods < 0:
        raise UsageError("--periods must be non-negative")
    if args.dt <= 0:
        raise UsageError("--dt must be positive")
    try:
        initial = init_relative_equilibrium(params, force=args.force)
    except DegenerateConfigurationError as err:
        print(f"degenerate: {err}", file=sys.stderr)
        return EX_DEGENERATE
    except UnphysicalParametersError as err:
        print(f"refused: {err}", file=sys.stderr)
        return EX_REFUSED

    def trajectory_csv(traj) -> str:
        lines = [TRAJECTORY_CSV_HEADER]
        for sample, energy, angmom in zip(
            traj.samples, traj.energy_series, traj.angular_momentum_series
        ):
            coords = sample.position_array().ravel()
            lines.append(
                ",".join(
                    [fnum(sample.time)]
                    + [fnum(c) for c in coords]
                    + [fnum(energy), fnum(angmom)]
                )
            )
        return "\n".join(lines) + "\n"

    parameters = {
        "alpha": params.alpha,
        "beta": params.beta,
        "periods": args.periods,
        "dt": args.dt,
        "stride": args.stride,
        "out": args.out,
        "force": args.force,
    }
    if args.periods == 0:
        write_text(args.out, TRAJECTORY_CSV_HEADER + "\n")
        payload = {
            "max_distance_deviation": 0.0,
            "max_energy_drift": 0.0,
            "max_angular_momentum_drift": 0.0,
            "samples": 0,
        }
        emit_json(envelope("simulate", parameters, payload, []))
        return EX_OK

    t_end = args.periods * 2.0 * math.pi
    try:
        trajectory = integrate(initial, dt=args.dt, t_end=t_end, output_stride=args.stride)
    except CollisionError as err:
        write_text(args.out, trajectory_csv(err.trajectory))
        print(f"collision: {err}", file=sys.stderr)
        return EX_COLLISION

    write_text(args.out, trajectory_csv(trajectory))
    report = rigidity_metrics(trajectory)
    payload = {
        "max_distance_deviation": report.max_distance_deviation,
        "max_energy_drift": report.max_energy_drift,
        "max_angular_momentum_drift": report.max_angular_momentum_drift,
        "samples": len(trajectory.samples),
    }
    emit_json(envelope("simulate", parameters, payload, []))
    return EX_OK if report.max_distance_deviation <= 1e-5 else EX_VERIFY_FAILED


def cmd_compare_approx(args) -> int:
    n_alpha, n_beta = _parse_resolution(args.resolution)
    try:
        grid = raster((0.0, 1.0), (0.0, 1.0), n_alpha, n_beta)
    except ValueError as err:
        raise UsageError(str(err))
    report = compare_exact_vs_approx(grid)
    audit = audit_published_domains()

    def worst_cells(exact, approx, count=10):
        dev = np.abs(exact - approx)
        flat = np.argsort(dev.ravel())[::-1][:count]
        rows = []
        for idx in flat:
            i, j = np.unravel_index(idx, dev.shape)
            rows.append(
                {
                    "alpha": float(grid.alpha_axis[j]),
                    "beta": float(grid.beta_axis[i]),
                    "exact": float(exact[i, j]),
                    "approx": float(approx[i, j]),
                }
            )
        return rows

    grid_a, grid_b = np.meshgrid(grid.alpha_axis, grid.beta_axis)
    payload = {
        "f1": {
            "sign_agreement": report.f1_sign_agreement,
            "max_abs_deviation": report.f1_max_abs_deviation,
            "mean_abs_deviation": report.f1_mean_abs_deviation,
            "disagreement_count": len(report.f1_disagreements),
            "disagreement_cells": [list(c) for c in report.f1_disagreements[:50]],
            "worst_cells": worst_cells(grid.f1, f1_approx(grid_a, grid_b)),
        },
        "f3": {
            "sign_agreement": report.f3_sign_agreement,
            "max_abs_deviation": report.f3_max_abs_deviation,
            "mean_abs_deviation": report.f3_mean_abs_deviation,
            "disagreement_count": len(report.f3_disagreements),
            "disagreement_cells": [list(c) for c in report.f3_disagreements[:50]],
            "worst_cells": worst_cells(grid.f3, f3_approx(grid_a, grid_b)),
        },
        "published_domains": {
            "n_samples": audit.n_samples,
            "g1_real_intervals": [list(iv) for iv in audit.g1_intervals],
            "g3_real_intervals": [list(iv) for iv in audit.g3_intervals],
            "g1_failures": [list(f) for f in audit.g1_failures],
            "g3_failures": [list(f) for f in audit.g3_failures],
        },
    }
    doc = envelope("compare-approx", {"resolution": f"{n_alpha}x{n_beta}"}, payload, [])
    if args.out:
        write_text(args.out, json.dumps(doc, indent=2) + "\n")
    emit_json(doc)
    return EX_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="trapcc", description=__doc__)
    parser.add_argument("--version", action="version", version=f"trapcc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("masses", parents=[], help="closed-form masses and the region label")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=cmd_masses)

    p = sub.add_parser("verify", help="check the full per-body force balance")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("raster", help="classify a grid of the parameter plane to CSV")
    p.add_argument("--alpha-range", default="0,1")
    p.add_argument("--beta-range", default="0,1")
    p.add_argument("--resolution", default="400", help="N or NxM (alpha x beta)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: TRAPCC_THREADS or 1)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_raster)

    p = sub.add_parser("boundary", help="trace a zero set of f1 or f3 to CSV")
    p.add_argument("--which", choices=("f1", "f3"), required=True)
    p.add_argument("--axis", choices=("alpha", "beta"), required=True,
                   help="the axis held fixed")
    p.add_argument("--fixed", default="", help="comma-separated fixed coordinates")
    p.add_argument("--method", choices=("exact", "published"), default="exact")
    p.add_argument("--search-interval", default=None, help="LO,HI for the free axis")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("simulate", help="integrate a rigid-rotation candidate")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--periods", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--stride", type=int, default=100)
    p.add_argument("--force", action="store_true",
                   help="integrate even with non-positive masses")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare-approx", help="exact versus published surrogates")
    p.add_argument("--resolution", default="100")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_compare_approx)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EX_USAGE
    except IOError as err:
        print(f"io error: {err}", file=sys.stderr)
        return EX_IO


if __name__ == "__main__":
    sys.exit(main())
