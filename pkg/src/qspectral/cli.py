"""Command-line front end: one JSON document in, one JSON report out.

Exit status: 0 when every executed check passes, 1 when a check fails,
2 on malformed input, 3 when a normal operator was required and the input
is not normal.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .errors import NotNormalError
from .measure import build_measure, reconstruct_operator
from .qoperator import QMatrix, classify, operator_norm
from .quaternion import DEFAULT_TOL
from .report import InputError, dumps, load_document, matrix_to_list, parse_frame, parse_matrix, parse_symbol
from .slice_spectral import commutes_with, construct_J_via_z_transform
from .unbounded import DEFAULT_SIZES, build_tower, measure_consistency, projection_nesting, unboundedness_signature
from .verify import evolution_report, run_suite

COMMANDS = ("check", "decompose", "measure", "verify", "evolve", "tower")
DEFAULT_T_GRID = (0.1, 1.0, 10.0)
EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NOT_NORMAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qspectral", description="Spectral analysis of normal quaternion matrices.")
    p.add_argument("--cmd", required=True, choices=COMMANDS)
    p.add_argument("--in", dest="input", help="JSON input document (default: none for verify/tower)")
    p.add_argument("--out", help="write the report here instead of standard output")
    p.add_argument("--m", help='unit imaginary of the slice plane as "w,x,y,z" (default i)')
    p.add_argument("--n", help="second frame axis, orthogonal to m")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="normality / classification tolerance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sizes", help="comma-separated truncation sizes for the tower command")
    return p


def _parse_4(text: str, flag: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError as exc:
        raise InputError(f"{flag} must be four comma-separated numbers, got {text!r}") from exc
    if len(vals) != 4:
        raise InputError(f"{flag} must be four comma-separated numbers, got {text!r}")
    return vals


def _parse_sizes(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise InputError(f"--sizes must be comma-separated integers, got {text!r}") from exc


def _require_matrix(doc: dict) -> QMatrix:
    if "matrix" not in doc:
        raise InputError("input document has no 'matrix'")
    return parse_matrix(doc["matrix"])


def _checks_passed(checks: dict) -> bool:
    return all(c["passed"] for c in checks.values())


def _check(residual: float, tol: float) -> dict:
    return {"residual": float(residual), "tol": float(tol), "passed": bool(residual <= tol)}


def cmd_check(T, frame, args, doc) -> tuple[dict, int]:
    cls = classify(T, args.tol)
    return {"classification": cls.to_dict(), "operator_norm": operator_norm(T)}, EXIT_OK


def cmd_decompose(T, frame, args, doc) -> tuple[dict, int]:
    F = build_measure(T, frame, args.tol)
    es, J = F.eigensystem, F.J
    scale = max(1.0, operator_norm(T))
    Jz = construct_J_via_z_transform(T, frame, args.tol).J
    bd = F.basis.defects()
    checks = {
        "eigen_residual": _check(es.residual / scale, 1e-9),
        "eigenbasis_unitarity": _check(es.unitarity_defect, 1e-10),
        "J_structure": _check(max(J.defects().values()), 1e-10),
        "J_commutes_with_T": _check(commutes_with(J.J, T) / scale, 1e-9),
        "z_route_J_commutes_with_T": _check(commutes_with(Jz, T) / scale, 1e-9),
        "slice_basis_membership": _check(bd["membership"], 1e-10),
        "slice_basis_orthonormality": _check(bd["orthonormality"], 1e-10),
    }
    report = {
        "eigenvalues": [[d.alpha, d.beta] for d in es.D],
        "clusters": [{"lambda": [c.value.alpha, c.value.beta], "multiplicity": c.multiplicity} for c in es.clusters],
        "U": matrix_to_list(es.U),
        "J": matrix_to_list(J.J),
        "slice_basis": matrix_to_list(F.basis.U),
        "checks": checks,
    }
    return report, EXIT_OK if _checks_passed(checks) else EXIT_FAIL


def cmd_measure(T, frame, args, doc) -> tuple[dict, int]:
    F = build_measure(T, frame, args.tol)
    rec = (reconstruct_operator(F) - T).frobenius() / max(1.0, T.frobenius())
    worst = max((p["projection_residual"] for p in F.to_report()["points"]), default=0.0)
    checks = {"reconstruction": _check(rec, 1e-9), "projections": _check(worst, 1e-10)}
    report = {"measure": F.to_report(), "projections": [matrix_to_list(P) for P in F.projections], "checks": checks}
    return report, EXIT_OK if _checks_passed(checks) else EXIT_FAIL


def cmd_verify(T, frame, args, doc) -> tuple[dict, int]:
    checks = run_suite(T, frame, seed=args.seed)
    failed = [c for c in checks if not c.passed]
    report = {
        "operator": "input" if T is not None else "random normal (n=6)",
        "properties": [c.to_dict() for c in checks],
        "passed": not failed,
        "first_failure": failed[0].name if failed else None,
    }
    return report, EXIT_FAIL if failed else EXIT_OK


def cmd_evolve(T, frame, args, doc) -> tuple[dict, int]:
    grid = doc.get("t_grid", list(DEFAULT_T_GRID))
    if not isinstance(grid, list) or not all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in grid):
        raise InputError("t_grid must be an array of numbers")
    build_measure(T, frame, args.tol)  # normality gate
    rep = evolution_report(T, frame, grid)
    return rep, EXIT_OK if rep["passed"] else EXIT_FAIL


def cmd_tower(T, frame, args, doc) -> tuple[dict, int]:
    symbol, sizes = parse_symbol(doc.get("symbol", {}), frame.m)
    if args.sizes:
        sizes = _parse_sizes(args.sizes)
    sizes = sizes or list(DEFAULT_SIZES)
    try:
        tower = build_tower(symbol, sizes)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    sig = unboundedness_signature(tower, frame)
    cons = measure_consistency(tower, frame, np.random.default_rng(args.seed))
    nest = projection_nesting(tower, frame)
    checks = {
        "z_contractive": _check(0.0 if sig["z_contractive"] else 1.0, 0.0),
        "truncation_J_commutation": _check(max(sig["J_commutation"]), 1e-9),
        "measure_consistency": _check(
            max(cons["inner_residual"], cons["measure_residual"], cons["exclusion_residual"]), cons["tol"]
        ),
        "projection_nesting": _check(nest, 1e-10),
    }
    report = {
        "symbol": {"family": symbol.family, "growth": symbol.growth, "prefix": [q.to_list() for q in symbol.prefix]},
        "signature": sig,
        "consistency": cons,
        "checks": checks,
    }
    return report, EXIT_OK if _checks_passed(checks) else EXIT_FAIL


HANDLERS = {
    "check": cmd_check,
    "decompose": cmd_decompose,
    "measure": cmd_measure,
    "verify": cmd_verify,
    "evolve": cmd_evolve,
    "tower": cmd_tower,
}


def run(args: argparse.Namespace) -> tuple[dict, int]:
    """Execute one job; returns the report and the exit status."""
    header = {"version": __version__, "command": args.cmd, "seed": args.seed, "tolerances": {"normality": args.tol}}
    try:
        if args.input is not None:
            try:
                with open(args.input, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise InputError(f"cannot read input: {exc}") from exc
            doc = load_document(text)
        elif args.cmd in ("verify", "tower"):
            doc = {}
        else:
            raise InputError(f"--cmd {args.cmd} needs --in")
        frame = parse_frame(
            doc.get("frame"),
            None if args.m is None else _parse_4(args.m, "--m"),
            None if args.n is None else _parse_4(args.n, "--n"),
        )
        if not args.tol > 0:
            raise InputError("--tol must be positive")
        header["frame"] = frame.to_dict()
        T = _require_matrix(doc) if (args.cmd not in ("verify", "tower") or "matrix" in doc) else None
        body, status = HANDLERS[args.cmd](T, frame, args, doc)
    except InputError as exc:
        return {**header, "error": {"kind": "input", "message": str(exc)}}, EXIT_INPUT
    except NotNormalError as exc:
        err = {"kind": "not_normal", "message": str(exc), "normality_residual": exc.residual, "tol": exc.tol}
        return {**header, "error": err}, EXIT_NOT_NORMAL
    return {**header, **body, "exit_status": status}, status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    report, status = run(args)
    text = dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if status == EXIT_FAIL and args.cmd == "verify":
        print(f"verify: first failing property: {report['first_failure']}", file=sys.stderr)
    elif "error" in report:
        print(f"qspectral: {report['error']['message']}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
