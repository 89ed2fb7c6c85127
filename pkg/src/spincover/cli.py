"""Command-line front end.

Commands
    rotor-from-matrix   recover the rotor pair covering an SO+(p,q) matrix
    matrix-from-rotor   apply the forward map to a rotor
    check               report SO+(p,q) membership residuals
    selfcheck           run the built-in verification suites

Input is JSON from a file path, inline text starting with "{", or standard
input ("-", the default). Matrices: {"p": int, "q": int, "matrix": [[...]]}
row-major; rotors: {"p": int, "q": int, "rotor": {"1": c0, "e12": c3, ...}}.

Exit codes: 0 ok, 1 selfcheck failure, 2 bad input, 3 membership or rotor
invariant rejection, 4 numerical failure (no usable candidate). All floats
are printed with 17 significant digits, so output is byte-stable and
round-trips exactly through text.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .clifford_core import Multivector, Signature, blade_from_name, blade_name
from .covering import NoCandidateError, Rotor, forward_map, matrix_to_rotor, select_candidate
from .division_algebras import (
    SIG_21,
    SIG_30,
    quaternion_to_su2,
    rotor_to_quaternion,
    rotor_to_split,
    select_quaternion_candidate,
    select_split_candidate,
    split_to_rotor,
    split_to_su11,
    quaternion_to_rotor,
)
from .matrix_group import (
    DEFAULT_TOLERANCE,
    MembershipReport,
    as_square_matrix,
    check_membership,
    project_to_group,
)
from .oracle import run_selfcheck, verify_covering

EXIT_OK = 0
EXIT_SELFCHECK = 1
EXIT_BAD_INPUT = 2
EXIT_REJECTED = 3
EXIT_NUMERICAL = 4


# ---------------------------------------------------------------------------
# Stable JSON output
# ---------------------------------------------------------------------------

def render_json(obj: object) -> str:
    """Serialize with insertion-ordered keys and %.17g floats."""
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r} in output")
        return "%.17g" % value
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = ", ".join(f"{json.dumps(str(k))}: {render_json(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(render_json(v) for v in obj) + "]"
    if obj is None:
        return "null"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(obj: object) -> None:
    sys.stdout.write(render_json(obj) + "\n")


def _fail(code: int, message: str, report: MembershipReport | None = None) -> int:
    doc: dict = {"error": message, "exit_code": code}
    if report is not None:
        doc["report"] = _report_dict(report)
    _emit(doc)
    print(message, file=sys.stderr)
    return code


def _report_dict(report: MembershipReport) -> dict:
    return {
        "metric_residual": report.metric_residual,
        "determinant": report.determinant,
        "orientation_minor": report.orientation_minor,
        "tolerance": report.tolerance,
        "ok": report.ok,
        "failures": report.failures(),
    }


def _rotor_dict(value: Multivector) -> dict:
    return {blade_name(mask): coeff for mask, coeff in value.terms()}


def _matrix_rows(arr: np.ndarray) -> list:
    return [[float(x) for x in row] for row in arr]


def _complex_rows(mat: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in mat]


# ---------------------------------------------------------------------------
# Input parsing (all failures here mean exit code 2)
# ---------------------------------------------------------------------------

def _load_json(source: str) -> dict:
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith("{"):
        text = source
    else:
        with open(source, "r", encoding="utf-8") as handle:
            text = handle.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ValueError("top-level JSON value must be an object")
    return obj


def _parse_signature(obj: dict) -> Signature:
    for key in ("p", "q"):
        if key not in obj:
            raise ValueError(f'missing "{key}" in input')
        if not isinstance(obj[key], int) or isinstance(obj[key], bool):
            raise ValueError(f'"{key}" must be an integer, got {obj[key]!r}')
    try:
        return Signature(obj["p"], obj["q"])
    except ValueError as exc:
        raise ValueError(str(exc)) from exc


def _parse_matrix_input(obj: dict) -> tuple[Signature, np.ndarray]:
    sig = _parse_signature(obj)
    if "matrix" not in obj:
        raise ValueError('missing "matrix" in input')
    try:
        arr = as_square_matrix(obj["matrix"], sig.n)
    except (ValueError, TypeError) as exc:
        raise ValueError(f"bad matrix: {exc}") from exc
    return sig, arr


def _parse_rotor_input(obj: dict) -> tuple[Signature, Multivector]:
    sig = _parse_signature(obj)
    table = obj.get("rotor")
    if not isinstance(table, dict) or not table:
        raise ValueError('missing or empty "rotor" object in input')
    coeffs = np.zeros(sig.dim)
    for name, value in table.items():
        mask = blade_from_name(name, sig.n)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValueError(f"coefficient of {name} must be a number, got {value!r}")
        if not math.isfinite(float(value)):
            raise ValueError(f"coefficient of {name} must be finite")
        coeffs[mask] += float(value)
    return sig, Multivector(sig, coeffs)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_rotor_from_matrix(args: argparse.Namespace) -> int:
    try:
        sig, arr = _parse_matrix_input(_load_json(args.input))
        if args.method == "quaternion" and (sig.p, sig.q) not in {(3, 0), (2, 1)}:
            raise ValueError(
                f"method 'quaternion' needs signature (3,0) or (2,1), got ({sig.p},{sig.q})"
            )
        if args.project:
            arr = project_to_group(arr, sig)
    except (OSError, ValueError) as exc:
        return _fail(EXIT_BAD_INPUT, str(exc))

    report = check_membership(arr, sig, args.tol)
    if not report.ok:
        return _fail(EXIT_REJECTED, str(report), report)

    extras: dict = {}
    try:
        if args.method == "quaternion":
            if (sig.p, sig.q) == (3, 0):
                f_mask, cand = select_quaternion_candidate(arr)
                scale = 1.0 / math.sqrt(cand.norm_squared())
                unit = type(cand)(cand.a * scale, cand.b * scale, cand.c * scale, cand.d * scale)
                rotor = quaternion_to_rotor(unit).canonicalized()
                aligned = rotor_to_quaternion(rotor)
                extras["quaternion"] = {"a": aligned.a, "b": aligned.b, "c": aligned.c, "d": aligned.d}
                extras["su2"] = _complex_rows(quaternion_to_su2(aligned))
            else:
                f_mask, cand = select_split_candidate(arr)
                scale = 1.0 / math.sqrt(cand.norm_squared())
                unit = type(cand)(cand.a * scale, cand.b * scale, cand.c * scale, cand.d * scale)
                rotor = split_to_rotor(unit).canonicalized()
                aligned = rotor_to_split(rotor)
                extras["split_quaternion"] = {"a": aligned.a, "b": aligned.b, "c": aligned.c, "d": aligned.d}
                extras["su11"] = _complex_rows(split_to_su11(aligned))
        else:
            cand_el = select_candidate(arr, sig, method=args.method)
            f_mask = cand_el.F
            rotor = matrix_to_rotor(arr, sig, method=args.method, validate=False)
    except NoCandidateError as exc:
        return _fail(EXIT_NUMERICAL, str(exc))

    residual = max(
        verify_covering(rotor, arr).max_residual,
        verify_covering(-rotor, arr).max_residual,
    )
    out: dict = {
        "p": sig.p,
        "q": sig.q,
        "method": args.method,
        "F": blade_name(f_mask),
        "rotor": _rotor_dict(rotor.value),
        "rotor_negated": _rotor_dict(-rotor.value),
        "residual": residual,
    }
    out.update(extras)
    _emit(out)
    return EXIT_OK


def cmd_matrix_from_rotor(args: argparse.Namespace) -> int:
    try:
        sig, value = _parse_rotor_input(_load_json(args.input))
    except (OSError, ValueError) as exc:
        return _fail(EXIT_BAD_INPUT, str(exc))
    try:
        rotor = Rotor.checked(value, args.tol)
        matrix = forward_map(rotor, args.tol)
    except ValueError as exc:
        return _fail(EXIT_REJECTED, f"rotor invariant violated: {exc}")
    report = check_membership(matrix, sig, args.tol)
    _emit(
        {
            "p": sig.p,
            "q": sig.q,
            "matrix": _matrix_rows(matrix),
            "membership": _report_dict(report),
        }
    )
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    try:
        sig, arr = _parse_matrix_input(_load_json(args.input))
    except (OSError, ValueError) as exc:
        return _fail(EXIT_BAD_INPUT, str(exc))
    report = check_membership(arr, sig, args.tol)
    doc = {"p": sig.p, "q": sig.q}
    doc.update(_report_dict(report))
    _emit(doc)
    if not report.ok:
        print(str(report), file=sys.stderr)
        return EXIT_REJECTED
    return EXIT_OK


def cmd_selfcheck(args: argparse.Namespace) -> int:
    try:
        sig = Signature(args.p, args.q)
        if args.trials <= 0:
            raise ValueError("--trials must be positive")
    except ValueError as exc:
        return _fail(EXIT_BAD_INPUT, str(exc))
    result = run_selfcheck(sig, trials=args.trials, seed=args.seed)
    _emit(result)
    if not result["ok"]:
        print("selfcheck failed; see residuals above", file=sys.stderr)
        return EXIT_SELFCHECK
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spincover",
        description="Convert between SO+(p,q) matrices and the spin-group rotor pairs covering them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    rfm = sub.add_parser("rotor-from-matrix", help="recover the rotor pair for a matrix")
    rfm.add_argument("input", nargs="?", default="-", help='file path, inline JSON, or "-" for stdin')
    rfm.add_argument("--method", choices=["general", "n3", "quaternion"], default="general")
    rfm.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE, help="membership tolerance")
    rfm.add_argument(
        "--project",
        action="store_true",
        help="project the input onto the group (polar-type iteration) before validating",
    )
    rfm.set_defaults(func=cmd_rotor_from_matrix)

    mfr = sub.add_parser("matrix-from-rotor", help="apply the covering map to a rotor")
    mfr.add_argument("input", nargs="?", default="-")
    mfr.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE, help="rotor invariant tolerance")
    mfr.set_defaults(func=cmd_matrix_from_rotor)

    chk = sub.add_parser("check", help="report SO+(p,q) membership residuals")
    chk.add_argument("input", nargs="?", default="-")
    chk.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE)
    chk.set_defaults(func=cmd_check)

    sc = sub.add_parser("selfcheck", help="run the verification suites")
    sc.add_argument("--p", type=int, required=True)
    sc.add_argument("--q", type=int, required=True)
    sc.add_argument("--trials", type=int, default=100)
    sc.add_argument("--seed", type=int, default=1)
    sc.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
