"""Command-line front end: solve, bound, certify, and the shifter sweep.

Data goes to standard output or files; diagnostics go to standard error.
Exit codes: 0 success/converged/certified, 1 input error, 2 solver did not
converge, 3 candidate not certified.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import fileio
from .certify import CERTIFIED_OPTIMAL, CertTolerances, certify
from .dual import extract_certificate, fidelity_upper_bound
from .model import assemble_operator, build_sdp, fidelity_from_primal
from .solver import CONVERGED, SolverOptions, solve
from .shifter import sweep

__all__ = ["main"]

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_NOT_CONVERGED = 2
EXIT_NOT_CERTIFIED = 3


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cptpopt",
        description="Optimal trace-preserving channels by semidefinite programming.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser(
        "solve", help="solve the optimal-channel problem for an ensemble or operator file"
    )
    p_solve.add_argument("input", help="ensemble file or fidelity-operator matrix file")
    p_solve.add_argument("--d1", type=int, help="input dimension when a matrix file is given")
    p_solve.add_argument("--out", help="directory for X.json, Z.json, certificate.json, summary.json")
    _add_format_flag(p_solve)
    _add_solver_flags(p_solve)
    p_solve.set_defaults(func=_cmd_solve)

    p_bound = sub.add_parser("bound", help="print the fidelity upper bound for a certificate A")
    p_bound.add_argument("operator", help="fidelity-operator matrix file")
    p_bound.add_argument("A", nargs="?", help="matrix file for the traceless A (default: A = 0)")
    p_bound.add_argument("--d1", type=int, help="input dimension when A is omitted")
    p_bound.set_defaults(func=_cmd_bound)

    p_certify = sub.add_parser("certify", help="certify a primal candidate against a certificate")
    p_certify.add_argument("candidate", help="channel-operator matrix file")
    p_certify.add_argument("certificate", help="certificate file with a0 and A")
    p_certify.add_argument("operator", help="fidelity-operator matrix file")
    p_certify.add_argument("--out", help="path for the JSON report")
    p_certify.add_argument("--tol-gap", type=float, default=1e-8, dest="tol_gap",
                           help="relative slackness/gap tolerance")
    p_certify.add_argument("--tol-feas", type=float, default=1e-9, dest="tol_feas",
                           help="PSD / trace-preservation tolerance")
    _add_format_flag(p_certify)
    p_certify.set_defaults(func=_cmd_certify)

    p_shifter = sub.add_parser("shifter", help="sweep the polar-angle shifter over a grid")
    p_shifter.add_argument("--grid", type=int, default=101,
                           help="number of uniform grid points over [0, pi] (default 101)")
    p_shifter.add_argument("--alpha", help="comma-separated explicit angles in radians")
    p_shifter.add_argument("--out", help="path for the delimited sweep table")
    _add_format_flag(p_shifter)
    _add_solver_flags(p_shifter)
    p_shifter.set_defaults(func=_cmd_shifter)

    return parser


def _add_solver_flags(sp: argparse.ArgumentParser):
    sp.add_argument("--tol-gap", type=float, default=1e-8, dest="tol_gap",
                    help="duality-gap tolerance")
    sp.add_argument("--tol-feas", type=float, default=1e-9, dest="tol_feas",
                    help="feasibility tolerance")
    sp.add_argument("--max-iter", type=int, default=200, dest="max_iter",
                    help="iteration budget")
    sp.add_argument("--verbose", action="count", default=0,
                    help="print per-iteration diagnostics to stderr")


def _add_format_flag(sp: argparse.ArgumentParser):
    sp.add_argument("--format", choices=("text", "delimited"), default="text",
                    help="stdout style for summaries and tables")


def _solver_options(args) -> SolverOptions:
    return SolverOptions(
        gap_tol=args.tol_gap,
        feas_tol=args.tol_feas,
        max_iter=args.max_iter,
        verbosity=args.verbose,
    )


def _print_fields(pairs: list[tuple[str, object]], fmt: str):
    if fmt == "delimited":
        print(",".join(name for name, _ in pairs))
        print(",".join(_cell(value) for _, value in pairs))
    else:
        for name, value in pairs:
            print(f"{name} = {_cell(value)}")


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _cmd_solve(args) -> int:
    R, d1, d2 = fileio.read_target(args.input, args.d1)
    problem = build_sdp(R, d1, d2)
    solution = solve(problem, _solver_options(args))
    X = assemble_operator(solution.x, problem)
    certificate, _ = extract_certificate(solution.Z, R, d1, d2)

    if args.out:
        os.makedirs(args.out, exist_ok=True)
        fileio.write_matrix(os.path.join(args.out, "X.json"), X)
        fileio.write_matrix(os.path.join(args.out, "Z.json"), solution.Z)
        fileio.write_certificate(os.path.join(args.out, "certificate.json"), certificate)
        fileio._dump_json(
            {
                "F_opt": fidelity_from_primal(solution.p, d2),
                "p": solution.p,
                "d": solution.d,
                "gap": solution.gap,
                "status": solution.status,
            },
            os.path.join(args.out, "summary.json"),
        )

    _print_fields(
        [
            ("F_opt", fidelity_from_primal(solution.p, d2)),
            ("p", solution.p),
            ("d", solution.d),
            ("gap", solution.gap),
            ("status", solution.status),
        ],
        args.format,
    )
    return EXIT_OK if solution.status == CONVERGED else EXIT_NOT_CONVERGED


def _cmd_bound(args) -> int:
    R = fileio.read_matrix(args.operator)
    dim = R.shape[0]
    if args.A:
        A = fileio.read_matrix(args.A)
        d1 = A.shape[0]
    else:
        d1 = args.d1
        if d1 is None:
            d1 = int(round(dim**0.5))
            if d1 * d1 != dim:
                raise ValueError(f"{args.operator}: cannot infer d1 for dim {dim}; pass --d1")
        A = np.zeros((d1, d1))
    if d1 < 1 or dim % d1:
        raise ValueError(f"d1 = {d1} does not divide operator dim {dim}")
    bound = fidelity_upper_bound(A, R, d1, dim // d1)
    print(repr(bound))
    return EXIT_OK


def _cmd_certify(args) -> int:
    X = fileio.read_matrix(args.candidate)
    certificate = fileio.read_certificate(args.certificate)
    R = fileio.read_matrix(args.operator)
    d1 = certificate.A.shape[0]
    if R.shape[0] % d1:
        raise ValueError(f"certificate A dim {d1} does not divide operator dim {R.shape[0]}")
    d2 = R.shape[0] // d1
    tols = CertTolerances(psd=args.tol_feas, tp=args.tol_feas,
                          cs_rel=args.tol_gap, gap_rel=args.tol_gap)
    report = certify(X, certificate, R, d1, d2, tols)
    if args.out:
        fileio.write_report(args.out, report)
    _print_fields(
        [
            ("verdict", report.verdict),
            ("primal_fidelity", report.primal_fidelity),
            ("dual_bound", report.dual_bound),
            ("gap", report.gap),
            ("cs_residual", report.cs_residual),
            ("primal_psd_margin", report.primal_psd_margin),
            ("dual_psd_margin", report.dual_psd_margin),
            ("tp_violation", report.tp_violation),
        ],
        args.format,
    )
    return EXIT_OK if report.verdict == CERTIFIED_OPTIMAL else EXIT_NOT_CERTIFIED


def _parse_grid(args) -> list[float]:
    if args.alpha is not None:
        angles = [float(tok) for tok in args.alpha.split(",") if tok.strip()]
    else:
        if args.grid < 1:
            raise ValueError(f"grid must have at least one point, got {args.grid}")
        angles = list(np.linspace(0.0, math.pi, args.grid))
    if not angles:
        raise ValueError("empty angle grid")
    return angles


def _cmd_shifter(args) -> int:
    angles = _parse_grid(args)
    records = sweep(angles, _solver_options(args))
    if args.out:
        fileio.write_sweep(args.out, records)
    elif args.format == "delimited":
        print(fileio.format_sweep(records), end="")
    else:
        for rec in records:
            print(
                f"alpha {rec.alpha:.6f}  F_analytic {rec.f_analytic:.10f}  "
                f"F_numeric {rec.f_numeric:.10f}  gap {rec.gap:.3e}  "
                f"bound_A0 {rec.bound_a0:.10f}  certified {str(rec.certified).lower()}"
            )
    failures = [rec for rec in records if rec.status != CONVERGED]
    for rec in failures:
        print(f"alpha {rec.alpha!r}: {rec.status}", file=sys.stderr)
    return EXIT_OK if not failures else EXIT_NOT_CONVERGED


if __name__ == "__main__":
    sys.exit(main())
