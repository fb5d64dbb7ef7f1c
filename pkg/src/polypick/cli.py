"""Command-line front end: JSON problems in, JSON reports and CSV dumps out.

Subcommands: solve, classify, scale, verify, sample-variety, generate.
Outputs are deterministic: identical inputs produce byte-identical reports.
Exit codes: 0 success, 1 numeric/library error (machine-readable error
object on stdout), 2 classification-boundary ambiguity, 3 malformed input.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import serialization as ser
from .classify import classify
from .errors import NotExtremalDatum, PolypickError
from .geodesic import GeodesicParams, extremal_scale, geodesic_eval
from .hyperbolic import DECISION_BAND, mobius, normalize_problem
from .sampling import random_geodesic_params, problem_from_geodesic, sample_lambdas
from .solver import solve, verify, SolveReport

_EXIT_OK = 0
_EXIT_ERROR = 1
_EXIT_BOUNDARY = 2
_EXIT_MALFORMED = 3


def _dump(data: dict, fmt: str, out: str | None) -> None:
    if fmt == "pretty":
        text = json.dumps(data, indent=2, sort_keys=True)
    else:
        text = json.dumps(data, sort_keys=True, separators=(",", ":"))
    if out:
        Path(out).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _load_json(path: str) -> dict:
    return json.loads(Path(path).read_text())


def _error_object(exc: Exception) -> dict:
    obj = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    if isinstance(exc, NotExtremalDatum) and exc.extremal_scale is not None:
        obj["error"]["extremal_scale"] = exc.extremal_scale
    return obj


def _write_boundary_csv(report: SolveReport, path: Path, samples: int) -> None:
    """Moduli on the unit circle: geodesic coordinates and the composed product.

    Columns: coord_index, theta, modulus.  Row ``coord_index = -1`` is the
    composed Blaschke product; rows ``0..n-1`` are the geodesic coordinates
    (present only on geodesic routes).
    """
    thetas = 2.0 * np.pi * (np.arange(samples) + 0.5) / samples
    circle = np.exp(1j * thetas)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["coord_index", "theta", "modulus"])
        for th, lam in zip(thetas, circle):
            writer.writerow([-1, repr(float(th)), repr(abs(report.composed_blaschke(lam)))])
        if report.geodesic is not None:
            pts = geodesic_eval(report.geodesic, circle)
            for col, var in enumerate(report.geodesic_variables):
                for th, val in zip(thetas, pts[:, col]):
                    writer.writerow([var, repr(float(th)), repr(abs(complex(val)))])


def _write_variety_csv(report: SolveReport, path: Path, samples: int) -> None:
    """Residual of the scaled-geodesic identity on an (s, lambda) grid.

    Columns: s, lambda_re, lambda_im, residual.
    """
    g = report.geodesic
    lams = sample_lambdas(samples)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["s", "lambda_re", "lambda_im", "residual"])
        for s in np.linspace(0.0, 1.0, 10):
            scaled = GeodesicParams(g.x, g.y, s * g.alpha, g.t, g.omega)
            pts_small = geodesic_eval(scaled, lams)
            pts = np.zeros(pts_small.shape[:-1] + (report.n,), dtype=complex)
            for col, var in enumerate(report.geodesic_variables):
                pts[..., var] = pts_small[..., col]
            target = report.phase * lams * mobius(s * complex(np.dot(g.t, g.alpha)), lams)
            resid = np.abs(report.interpolant(pts) - target)
            for lam, rv in zip(lams, resid):
                writer.writerow(
                    [repr(float(s)), repr(float(lam.real)), repr(float(lam.imag)), repr(float(rv))]
                )


def _cmd_solve(args) -> int:
    problem = ser.problem_from_dict(_load_json(args.problem))
    report = solve(problem, band=args.tolerance, sample_budget=args.samples)
    _dump(ser.report_to_dict(report), args.format, args.out)
    if args.csv_dir:
        csv_dir = Path(args.csv_dir)
        csv_dir.mkdir(parents=True, exist_ok=True)
        _write_boundary_csv(report, csv_dir / "boundary.csv", 256)
        if report.geodesic is not None:
            _write_variety_csv(report, csv_dir / "variety.csv", 50)
    if report.classification.boundary_case:
        return _EXIT_BOUNDARY
    return _EXIT_OK


def _cmd_classify(args) -> int:
    problem = ser.problem_from_dict(_load_json(args.problem))
    problem.validate_distinct()
    normalized, _ = normalize_problem(problem)
    result = classify(normalized, band=args.tolerance)
    _dump(
        {
            "schema_version": ser.SCHEMA_VERSION,
            "classification": ser.classification_to_dict(result),
            "geodesic": ser.geodesic_to_dict(result.geodesic) if result.geodesic else None,
        },
        args.format,
        args.out,
    )
    return _EXIT_BOUNDARY if result.boundary_case else _EXIT_OK


def _cmd_scale(args) -> int:
    problem = ser.problem_from_dict(_load_json(args.problem))
    problem.validate_distinct()
    normalized, _ = normalize_problem(problem)
    z, w = normalized.nodes[1], normalized.nodes[2]
    result = extremal_scale(z, w, normalized.targets[1], normalized.targets[2])
    _dump(
        {
            "schema_version": ser.SCHEMA_VERSION,
            "scale": result.scale,
            "extremal_targets": ser.encode_cvector(result.extremal_targets),
            "phase": ser.encode_complex(result.phase),
            "geodesic": ser.geodesic_to_dict(result.geodesic),
        },
        args.format,
        args.out,
    )
    return _EXIT_OK


def _cmd_verify(args) -> int:
    report = ser.report_from_dict(_load_json(args.report))
    summary = verify(report, sample_budget=args.samples)
    _dump(
        {
            "schema_version": ser.SCHEMA_VERSION,
            "all_ok": summary.all_ok,
            "interpolation_ok": summary.interpolation_ok,
            "interpolation_max": summary.interpolation_max,
            "sup_norm_ok": summary.sup_norm_ok,
            "sup_norm_max": summary.sup_norm_max,
            "left_inverse_ok": summary.left_inverse_ok,
            "left_inverse_max": summary.left_inverse_max,
            "convex_combination_ok": summary.convex_combination_ok,
            "convex_combination_value": summary.convex_combination_value,
            "agler_ok": summary.agler_ok,
        },
        args.format,
        args.out,
    )
    return _EXIT_OK if summary.all_ok else _EXIT_ERROR


def _cmd_sample_variety(args) -> int:
    problem = ser.problem_from_dict(_load_json(args.problem))
    report = solve(problem, band=args.tolerance, sample_budget=0)
    if report.geodesic is None:
        raise PolypickError("variety sampling needs a geodesic route")
    csv_dir = Path(args.csv_dir or ".")
    csv_dir.mkdir(parents=True, exist_ok=True)
    _write_variety_csv(report, csv_dir / "variety.csv", args.samples or 50)
    _dump(
        {"schema_version": ser.SCHEMA_VERSION, "csv": str(csv_dir / "variety.csv")},
        args.format,
        args.out,
    )
    return _EXIT_OK


def _cmd_generate(args) -> int:
    if args.params:
        g = ser.geodesic_from_dict(json.loads(args.params))
    else:
        rng = np.random.default_rng(args.seed)
        g = random_geodesic_params(rng, args.n)
    problem = problem_from_geodesic(g)
    _dump(ser.problem_to_dict(problem), args.format, args.out)
    if args.params_out:
        Path(args.params_out).write_text(
            json.dumps(ser.geodesic_to_dict(g), indent=2, sort_keys=True) + "\n"
        )
    return _EXIT_OK


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default=None, help="write JSON output to this path")
    parser.add_argument("--csv-dir", default=None, help="directory for CSV dumps")
    parser.add_argument(
        "--tolerance",
        type=float,
        default=DECISION_BAND,
        help="decision band for classification predicates",
    )
    parser.add_argument(
        "--samples", type=int, default=1024, help="sampling budget for checks"
    )
    parser.add_argument("--format", choices=("json", "pretty"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polypick",
        description="Extremal three-point Pick interpolation on polydiscs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func, needs_problem in (
        ("solve", _cmd_solve, True),
        ("classify", _cmd_classify, True),
        ("scale", _cmd_scale, True),
        ("sample-variety", _cmd_sample_variety, True),
    ):
        sp = sub.add_parser(name)
        sp.add_argument("problem", help="problem JSON file")
        _common(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("verify")
    sp.add_argument("report", help="report JSON file produced by solve")
    _common(sp)
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("generate")
    sp.add_argument("--n", type=int, default=2, help="polydisc dimension")
    sp.add_argument("--seed", type=int, default=0, help="deterministic seed")
    sp.add_argument(
        "--params", default=None, help="explicit geodesic parameters as JSON"
    )
    sp.add_argument(
        "--params-out", default=None, help="write the generating parameters here"
    )
    _common(sp)
    sp.set_defaults(func=_cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        _dump(_error_object(exc), "json", None)
        return _EXIT_MALFORMED
    except FileNotFoundError as exc:
        _dump(_error_object(exc), "json", None)
        return _EXIT_MALFORMED
    except (PolypickError, ValueError, ArithmeticError) as exc:
        _dump(_error_object(exc), "json", None)
        return _EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
