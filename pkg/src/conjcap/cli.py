"""Command-line interface: capacities, classification, figure-data export.

Exit codes: 0 success, 1 usage error, 2 validation or parse error,
3 resource-cap error.  The environment variable CONJCAP_TOL, when set,
replaces the built-in default of every tolerance flag; explicit flags still
win.  All file output is written to a temporary file and renamed, so a
failing command never leaves a partial file behind.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .capacity import coherent_information
from .channels import choi_rank, kraus_to_choi, load_channel, save_channel, stinespring_to_kraus
from .cloners import ClonerSpec, build_cloner_isometry, cloner_capacity_closed_form
from .degradability import (
    CHOI_DIM_CAP,
    MODES,
    RESIDUAL_TOL,
    feasibility_search,
    is_entanglement_breaking,
)
from .errors import DimensionError, ResourceLimitError, ValidationError
from .qmat import as_density
from .unruh import DEFAULT_TAIL_TOL, UnruhSpec, unruh_capacity, unruh_sweep, write_sweep_csv

TOL_ENV_VAR = "CONJCAP_TOL"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_RESOURCE = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; this project reserves
    2 for validation failures, so remap to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _env_default_tol(fallback: float) -> float:
    """Single parse point for the CONJCAP_TOL override."""
    raw = os.environ.get(TOL_ENV_VAR)
    if raw is None:
        return fallback
    try:
        value = float(raw)
    except ValueError:
        raise ValidationError(f"{TOL_ENV_VAR}={raw!r} is not a number") from None
    if value <= 0:
        raise ValidationError(f"{TOL_ENV_VAR} must be positive, got {raw}")
    return value


def _emit(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=True))
        return
    for key, value in report.items():
        print(f"{key}: {value}")


def _cmd_capacity_cloner(args) -> int:
    spec = ClonerSpec(args.n, args.m)
    iso = build_cloner_isometry(spec)
    mixed = as_density(np.eye(spec.din) / spec.din)
    closed = cloner_capacity_closed_form(spec)
    numeric = coherent_information(iso, mixed)
    _emit({
        "n": args.n,
        "m": args.m,
        "closed_form_bits": closed,
        "coherent_info_bits": numeric,
        "delta": abs(closed - numeric),
    }, args.json)
    return EXIT_OK


def _cmd_capacity_unruh(args) -> int:
    tail_tol = args.tail_tol if args.tail_tol is not None else _env_default_tol(DEFAULT_TAIL_TOL)
    if args.sweep is not None:
        z_min, z_max = args.sweep
        rows = unruh_sweep(z_min, z_max, args.steps, tail_tol)
        if args.out is not None:
            write_sweep_csv(rows, args.out)
            print(f"wrote {len(rows)} rows to {args.out}")
        else:
            print("z,Q_bits")
            for z, q in rows:
                print(f"{z!r},{q!r}")
        return EXIT_OK
    spec = UnruhSpec(args.z, tail_tol)
    _emit({
        "z": args.z,
        "Q_bits": unruh_capacity(args.z, tail_tol),
        "k_max": spec.k_max,
        "tail_tol": tail_tol,
    }, args.json)
    return EXIT_OK


def _verdict_dict(v) -> dict:
    return {
        "holds": v.holds,
        "residual": v.residual,
        "min_eigenvalue": v.min_eigenvalue,
        "iterations": v.iterations,
        "converged": v.converged,
    }


def _cmd_classify(args) -> int:
    residual_tol = (args.residual_tol if args.residual_tol is not None
                    else _env_default_tol(RESIDUAL_TOL))
    ch = load_channel(args.channel_file)
    verdicts = {
        mode: feasibility_search(ch, mode, residual_tol=residual_tol,
                                 dim_cap=args.dim_cap)
        for mode in args.modes
    }
    report = {
        "din": ch.din,
        "dout": ch.dout,
        "choi_rank": choi_rank(kraus_to_choi(ch)),
        "entanglement_breaking": is_entanglement_breaking(ch),
        "verdicts": {mode: _verdict_dict(v) for mode, v in verdicts.items()},
    }
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
        return EXIT_OK
    print(f"channel: {ch.din} -> {ch.dout}")
    print(f"choi_rank: {report['choi_rank']}")
    print(f"entanglement_breaking: {'yes' if report['entanglement_breaking'] else 'no'}")
    for mode, v in verdicts.items():
        if v.holds:
            print(f"{mode}: yes (residual {v.residual:.3e}, "
                  f"min eigenvalue {v.min_eigenvalue:.3e}, {v.iterations} iterations)")
        else:
            print(f"{mode}: not found (non-certificate; best residual {v.residual:.3e}, "
                  f"converged={v.converged})")
    return EXIT_OK


def _cmd_export_cloner(args) -> int:
    spec = ClonerSpec(args.n, args.m)
    ch = stinespring_to_kraus(build_cloner_isometry(spec))
    try:
        save_channel(ch, args.out)
    except OSError as exc:
        raise ValidationError(f"cannot write {args.out}: {exc}") from exc
    print(f"wrote {args.n} -> {args.m} cloner ({ch.din} -> {ch.dout}, "
          f"{len(ch.kraus)} Kraus operators) to {args.out}")
    return EXIT_OK


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="conjcap",
                     description="Quantum-channel capacity and degradability toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    cap = sub.add_parser("capacity", help="capacity computations")
    cap_sub = cap.add_subparsers(dest="target", required=True)

    cloner = cap_sub.add_parser("cloner", help="symmetric cloner capacity")
    cloner.add_argument("--n", type=_positive_int, required=True, help="input copies")
    cloner.add_argument("--m", type=_positive_int, required=True, help="output copies")
    cloner.add_argument("--json", action="store_true")
    cloner.set_defaults(func=_cmd_capacity_cloner)

    unruh = cap_sub.add_parser("unruh", help="accelerated-receiver channel capacity")
    which = unruh.add_mutually_exclusive_group(required=True)
    which.add_argument("--z", type=float, help="acceleration parameter in (0, 1)")
    which.add_argument("--sweep", nargs=2, type=float, metavar=("ZMIN", "ZMAX"))
    unruh.add_argument("--steps", type=int, default=100, help="sweep grid size")
    unruh.add_argument("--tail-tol", type=float, default=None,
                       help=f"series tail bound (default 1e-12 or ${TOL_ENV_VAR})")
    unruh.add_argument("--out", help="CSV output path (sweep only)")
    unruh.add_argument("--json", action="store_true")
    unruh.set_defaults(func=_cmd_capacity_unruh)

    classify_p = sub.add_parser("classify", help="degradability verdicts for a channel file")
    classify_p.add_argument("channel_file")
    classify_p.add_argument("--modes", nargs="+", choices=MODES, default=list(MODES))
    classify_p.add_argument("--residual-tol", type=float, default=None,
                            help=f"feasibility residual (default 1e-6 or ${TOL_ENV_VAR})")
    classify_p.add_argument("--dim-cap", type=int, default=CHOI_DIM_CAP,
                            help="candidate Choi dimension cap; raising it can "
                                 "make the search take minutes")
    classify_p.add_argument("--json", action="store_true")
    classify_p.set_defaults(func=_cmd_classify)

    export = sub.add_parser("export-cloner", help="write a cloner as a channel JSON file")
    export.add_argument("--n", type=_positive_int, required=True)
    export.add_argument("--m", type=_positive_int, required=True)
    export.add_argument("--out", required=True)
    export.set_defaults(func=_cmd_export_cloner)
    return parser


def _validate_usage(parser: argparse.ArgumentParser, args) -> None:
    """Range checks that argparse types cannot express; all exit with
    usage status before any computation starts."""
    if getattr(args, "func", None) is _cmd_capacity_cloner or \
            getattr(args, "func", None) is _cmd_export_cloner:
        if args.n > args.m:
            parser.error(f"--n must not exceed --m (got {args.n} > {args.m})")
    if getattr(args, "func", None) is _cmd_capacity_unruh:
        if args.z is not None and not 0.0 < args.z < 1.0:
            parser.error(f"--z must lie in (0, 1), got {args.z}")
        if args.sweep is not None:
            z_min, z_max = args.sweep
            if not 0.0 < z_min < z_max < 1.0:
                parser.error(f"--sweep needs 0 < ZMIN < ZMAX < 1, got {z_min} {z_max}")
            if args.steps < 2:
                parser.error(f"--steps must be at least 2, got {args.steps}")
        if args.tail_tol is not None and args.tail_tol <= 0:
            parser.error(f"--tail-tol must be positive, got {args.tail_tol}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate_usage(parser, args)
    try:
        return args.func(args)
    except json.JSONDecodeError as exc:
        print(f"error: parse failure at line {exc.lineno}, column {exc.colno}: {exc.msg}",
              file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"error: {exc.filename}: file not found", file=sys.stderr)
        return EXIT_VALIDATION
    except (ResourceLimitError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
