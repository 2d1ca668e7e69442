"""Command-line front end.

    nhscatter scan --potential pot.json --k-min 0.5 --k-max 1.5 --points 101 --out curve.csv
    nhscatter find --potential pot.json --k-min 0.1 --k-max 5 --out found.csv
    nhscatter hermitize --matrix h.json --out h_report.json

Exit codes: 0 success, 2 unreadable input or bad arguments, 3 non-real
spectrum, 4 exceptional point.  ``NHSCATTER_TOLERANCE`` sets the default
tolerance; ``--tolerance`` overrides it.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .errors import ExceptionalPointError, InvalidInputError, NoPositiveMetricError, ParseError
from .formats import (
    RESONANCE_COLUMNS,
    SINGULARITY_COLUMNS,
    RunManifest,
    load_matrix,
    load_potential,
    matrix_to_dict,
    resonance_rows,
    singularity_rows,
    write_csv,
    write_json,
)
from .pseudo_hermitian import hermitize
from .spectral_singularity import (
    DEFAULT_GRID_POINTS,
    DEFAULT_TOLERANCE,
    find_singularities,
    resonance_curve,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NON_REAL = 3
EXIT_EXCEPTIONAL = 4

TOLERANCE_ENV = "NHSCATTER_TOLERANCE"
REALITY_TOLERANCE = 1e-9


def _env_tolerance(default: float) -> float:
    raw = os.environ.get(TOLERANCE_ENV)
    if raw is None:
        return default
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(TOLERANCE_ENV, f"not a number: {raw!r}") from None
    if not value > 0:
        raise ParseError(TOLERANCE_ENV, "must be positive")
    return value


def _tolerance(args, default: float) -> float:
    if args.tolerance is not None:
        if not args.tolerance > 0:
            raise ParseError("--tolerance", "must be positive")
        return args.tolerance
    return _env_tolerance(default)


def _grid_args(sub):
    sub.add_argument("--potential", required=True, help="potential JSON file")
    sub.add_argument("--k-min", type=float, required=True)
    sub.add_argument("--k-max", type=float, required=True)
    sub.add_argument("--points", type=int, default=DEFAULT_GRID_POINTS)
    sub.add_argument("--out", required=True, help="output CSV path")
    sub.add_argument("--tolerance", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nhscatter", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    scan = subs.add_parser("scan", help="transmission/reflection curve over a k grid")
    _grid_args(scan)
    find = subs.add_parser("find", help="locate spectral singularities in a k range")
    _grid_args(find)

    herm = subs.add_parser("hermitize", help="metric operator and equivalent Hermitian matrix")
    herm.add_argument("--matrix", required=True, help="matrix JSON file")
    herm.add_argument("--out", required=True, help="output JSON path")
    herm.add_argument("--tolerance", type=float, default=None)
    return parser


def cmd_scan(args) -> int:
    potential = load_potential(args.potential)
    if args.points < 2:
        raise InvalidInputError(f"--points must be at least 2, got {args.points}")
    if not 0 < args.k_min < args.k_max:
        raise InvalidInputError(f"need 0 < k-min < k-max, got {args.k_min}, {args.k_max}")
    ks = np.linspace(args.k_min, args.k_max, args.points)
    write_csv(args.out, RESONANCE_COLUMNS, resonance_rows(resonance_curve(potential, ks)))
    RunManifest(
        "scan",
        [args.potential],
        {"k_min": args.k_min, "k_max": args.k_max, "points": args.points},
        args.out,
        __version__,
    ).write()
    return EXIT_OK


def cmd_find(args) -> int:
    potential = load_potential(args.potential)
    tolerance = _tolerance(args, DEFAULT_TOLERANCE)
    found = find_singularities(potential, args.k_min, args.k_max, args.points, tolerance)
    write_csv(args.out, SINGULARITY_COLUMNS, singularity_rows(found))
    RunManifest(
        "find",
        [args.potential],
        {"k_min": args.k_min, "k_max": args.k_max, "points": args.points, "tolerance": tolerance},
        args.out,
        __version__,
    ).write()
    return EXIT_OK


def cmd_hermitize(args) -> int:
    h = load_matrix(args.matrix)
    tolerance = _tolerance(args, REALITY_TOLERANCE)
    system, decomposition = hermitize(h, tol=tolerance)
    payload = {
        "eigenvalues": [[float(w.real), float(w.imag)] for w in system.eigenvalues],
        "metric": matrix_to_dict(decomposition.metric),
        "sqrt_metric": matrix_to_dict(decomposition.sqrt_metric),
        "hermitian_h": matrix_to_dict(decomposition.hermitian_h),
        "residuals": decomposition.residuals(h),
    }
    write_json(args.out, payload)
    RunManifest("hermitize", [args.matrix], {"tolerance": tolerance}, args.out, __version__).write()
    return EXIT_OK


COMMANDS = {"scan": cmd_scan, "find": cmd_find, "hermitize": cmd_hermitize}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ParseError, InvalidInputError) as exc:
        print(f"nhscatter {args.command}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NoPositiveMetricError as exc:
        print(f"nhscatter {args.command}: {exc}", file=sys.stderr)
        return EXIT_NON_REAL
    except ExceptionalPointError as exc:
        print(f"nhscatter {args.command}: exceptional point: {exc}", file=sys.stderr)
        return EXIT_EXCEPTIONAL


if __name__ == "__main__":
    sys.exit(main())
