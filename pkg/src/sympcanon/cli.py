"""Command-line front end.

Every subcommand writes one JSON report (sorted keys, floats with 17
significant digits) and exits with

0 success, 1 malformed input, 2 precondition violation,
3 numerically indeterminate, 4 verify-suite failure.
"""

from __future__ import annotations

import argparse
import contextlib
import hashlib
import json
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .blocks import BLOCK_KINDS, BlockSpec, is_symplectic, make_block
from .canonical import (
    canonicalize_hamiltonian,
    canonicalize_pair,
    congruent_pairs,
    symplectically_similar,
    williamson,
)
from .errors import IndeterminateError, PreconditionError
from .matrices import MatrixPair, field_of, matrix_from_json, matrix_to_json, omega
from .polynomials import Polynomial
from .scalars import RATIONAL, get_field, to_gaussian, tolerance
from .verify import MAX_BOUND, verify_suite

EXIT_OK, EXIT_MALFORMED, EXIT_PRECONDITION, EXIT_INDETERMINATE, EXIT_VERIFY = range(5)


class MalformedInput(Exception):
    pass


class VerifyFailure(Exception):
    def __init__(self, report):
        super().__init__("failing identities: " + ", ".join(report["failed"]))
        self.report = report


# ---------------------------------------------------------------------------
# deterministic JSON


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    if re.fullmatch(r"-?\d+", s):
        s += ".0"
    return s


def dumps(obj, indent: int = 0) -> str:
    """JSON with sorted keys, two-space indentation and 17-digit floats."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in sorted(obj.items())]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# ---------------------------------------------------------------------------
# input


def _read(path: str) -> tuple[object, dict]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from None
    try:
        obj = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedInput(f"{path}: invalid JSON ({exc})") from None
    return obj, {"path": str(path), "sha256": hashlib.sha256(raw).hexdigest()}


def _matrix(obj, field, what: str) -> np.ndarray:
    try:
        return matrix_from_json(obj, field)
    except PreconditionError as exc:
        raise MalformedInput(f"{what}: {exc}") from None


def load_matrix(path: str, field=None):
    obj, meta = _read(path)
    if isinstance(obj, dict) and "A" in obj and "rows" not in obj:
        obj = obj["A"]
    return _matrix(obj, field, path), meta


def load_pair(path: str, field=None):
    """A pair file ``{"A": matrix, "B": matrix}``, or a bare matrix meaning ``B = Omega``."""
    obj, meta = _read(path)
    if isinstance(obj, dict) and "A" in obj:
        A = _matrix(obj["A"], field, f"{path} (A)")
        if "B" in obj:
            B = _matrix(obj["B"], field or field_of(A).name, f"{path} (B)")
        else:
            B = None
    else:
        A, B = _matrix(obj, field, path), None
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] % 2:
        raise PreconditionError(f"{path}: A must be square of even size, got {A.shape}")
    if B is None:
        f = field_of(A)
        B = omega(A.shape[0] // 2, f if f.exact else get_field("real") if not f.is_complex else f)
    return MatrixPair(A, B), meta


_GAUSS = re.compile(r"^\s*([+-]?[\d/.]+)?\s*(?:([+-])\s*([\d/.]*)\s*i)?\s*$")


def parse_scalar(text: str | None, field):
    """Parse ``2``, ``1/3``, ``0.5``; with complex fields also ``1+2i`` or ``-i``."""
    if text is None:
        return None
    f = get_field(field) if field is not None else RATIONAL
    t = text.strip()
    try:
        if f.is_complex:
            if f.exact:
                m = _GAUSS.match(t)
                if m is None:
                    if t.endswith("i"):
                        im = t[:-1].strip()
                        im = im.lstrip("+")
                        return to_gaussian(["0", im + "1" if im in ("", "-") else im])
                    raise ValueError(t)
                re_, sgn, im = m.groups()
                imag = "0" if sgn is None else ("-" if sgn == "-" else "") + (im or "1")
                return to_gaussian([re_ or "0", imag])
            return f.convert(complex(t.replace("i", "j")))
        return f.convert(t if f.exact else float(t))
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise MalformedInput(f"cannot parse scalar {text!r}: {exc}") from None


# ---------------------------------------------------------------------------
# subcommands


def _decomposition_report(dec, with_cert: bool) -> dict:
    out = dec.to_json(certificate=with_cert)
    if not with_cert:
        out["certificate"] = None
    return out


def cmd_gen(args) -> dict:
    field = args.field or ("gaussian" if args.a and "i" in args.a else "rational")
    f = get_field(field)
    poly = None
    if args.block == "F":
        if not args.poly:
            raise MalformedInput("Frobenius blocks need --poly")
        poly = Polynomial(tuple(parse_scalar(c, f) for c in args.poly.split(",")))
    spec = BlockSpec(
        args.block,
        n=args.n,
        a=parse_scalar(args.a, f),
        b=parse_scalar(args.b, f),
        c=parse_scalar(args.c, f),
        poly=poly,
        power=args.power,
        sign=args.sign,
        field=f,
    )
    return matrix_to_json(make_block(spec))


def cmd_canon(path, args) -> dict:
    pair, meta = load_pair(path, args.field)
    dec = canonicalize_pair(pair, args.kind, args.tol, certificate=args.certificate)
    return {"inputs": [meta], "decomposition": _decomposition_report(dec, args.certificate)}


def cmd_ham_canon(path, args) -> dict:
    H, meta = load_matrix(path, args.field)
    dec = canonicalize_hamiltonian(H, args.kind, args.tol, certificate=args.certificate)
    return {"inputs": [meta], "decomposition": _decomposition_report(dec, args.certificate)}


def cmd_williamson(path, args) -> dict:
    A, meta = load_matrix(path, args.field)
    if field_of(A).is_complex:
        raise PreconditionError("Williamson's form needs a real matrix")
    D, S = williamson(A, args.tol)
    Af = np.array(A, dtype=float)
    n = D.shape[0]
    W = omega(n, get_field("real"))
    res_form = float(np.linalg.norm(S.T @ Af @ S - np.kron(np.eye(2), D)) / max(1.0, np.linalg.norm(Af)))
    res_sympl = float(np.linalg.norm(S.T @ W @ S - W))
    return {
        "inputs": [meta],
        "symplectic_eigenvalues": [float(x) for x in np.diag(D)],
        "D": matrix_to_json(D),
        "S": matrix_to_json(S),
        "residual": {"congruence": res_form, "symplectic": res_sympl},
        "symplectic": bool(is_symplectic(S, 1e-8)),
    }


def cmd_check_congruent(args) -> dict:
    p1, m1 = load_pair(args.inputs[0], args.field)
    p2, m2 = load_pair(args.inputs[1], args.field)
    ok = congruent_pairs(p1, p2, args.kind, args.tol)
    return {"inputs": [m1, m2], "congruent": ok}


def cmd_check_sympl_similar(args) -> dict:
    H1, m1 = load_matrix(args.inputs[0], args.field)
    H2, m2 = load_matrix(args.inputs[1], args.field)
    ok = symplectically_similar(H1, H2, args.kind, args.tol)
    return {"inputs": [m1, m2], "symplectically_similar": ok}


def cmd_verify_suite(args) -> dict:
    if not 1 <= args.bound <= MAX_BOUND:
        raise PreconditionError(f"--bound must be in 1..{MAX_BOUND}")
    report = verify_suite(args.bound).to_json()
    report["failed"] = [r["name"] for r in report["identities"] if not r["passed"]]
    if report["failed"]:
        raise VerifyFailure(report)
    return report


SINGLE_INPUT = {"canon": cmd_canon, "ham-canon": cmd_ham_canon, "williamson": cmd_williamson}


# ---------------------------------------------------------------------------
# driver


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", choices=["rational", "gaussian", "real", "complex"], help="override the input field")
    common.add_argument("--tol", type=float, default=None, help="floating comparison tolerance (default 1e-9)")
    common.add_argument("--out", help="write the report here instead of standard output")
    common.add_argument("--certificate", action="store_true", help="include the transform S when available")
    common.add_argument("--kind", choices=["real", "complex"], help="canonical list to use (default from the field)")

    p = argparse.ArgumentParser(prog="sympcanon", description="Canonical forms of symmetric/skew matrix pairs.")
    p.add_argument("--version", action="version", version=f"sympcanon {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="emit a named block as matrix JSON")
    g.add_argument("--block", required=True, choices=BLOCK_KINDS)
    g.add_argument("--n", type=int, default=1)
    g.add_argument("--a")
    g.add_argument("--b")
    g.add_argument("--c")
    g.add_argument("--sign", type=int, choices=[1, -1], default=1)
    g.add_argument("--poly", help="Frobenius polynomial, ascending comma-separated coefficients")
    g.add_argument("--power", type=int, default=1)

    for name, helptext in (
        ("canon", "canonical form of a pair (or of A with B = Omega)"),
        ("ham-canon", "canonical form of a Hamiltonian matrix"),
        ("williamson", "Williamson form of a positive definite matrix"),
    ):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("input", nargs="?")
        s.add_argument("--batch", help="process every *.json file in this directory")

    for name in ("check-congruent", "check-sympl-similar"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("inputs", nargs=2)

    v = sub.add_parser("verify-suite", parents=[common], help="run the exact identity battery")
    v.add_argument("--bound", type=int, default=3)
    return p


def _classify(exc: BaseException) -> int:
    if isinstance(exc, VerifyFailure):
        return EXIT_VERIFY
    if isinstance(exc, MalformedInput):
        return EXIT_MALFORMED
    if isinstance(exc, (IndeterminateError, ArithmeticError, np.linalg.LinAlgError)):
        return EXIT_INDETERMINATE
    if isinstance(exc, (PreconditionError, ValueError, TypeError)):
        return EXIT_PRECONDITION
    return EXIT_MALFORMED


def _error(exc: BaseException, code: int) -> dict:
    return {"error": {"type": type(exc).__name__, "message": str(exc), "exit_code": code}}


def _run_one(fn, *a) -> tuple[dict, int]:
    try:
        return fn(*a), EXIT_OK
    except Exception as exc:  # every failure becomes a documented exit code
        code = _classify(exc)
        out = _error(exc, code)
        if isinstance(exc, VerifyFailure):
            out.update(exc.report)
        return out, code


def run(argv=None) -> tuple[dict, int]:
    """Parse ``argv`` and execute; returns ``(report, exit_code)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_MALFORMED
        return ({} if code == 0 else _error(MalformedInput("bad command line"), EXIT_MALFORMED)), (0 if code == 0 else EXIT_MALFORMED)

    ctx = tolerance(args.tol) if args.tol is not None else contextlib.nullcontext()
    with ctx:
        if args.command == "gen":
            body, code = _run_one(cmd_gen, args)
        elif args.command in SINGLE_INPUT:
            fn = SINGLE_INPUT[args.command]
            if args.batch:
                files = sorted(Path(args.batch).glob("*.json")) if Path(args.batch).is_dir() else None
                if files is None:
                    body, code = _error(MalformedInput(f"{args.batch} is not a directory"), EXIT_MALFORMED), EXIT_MALFORMED
                else:
                    results, codes = {}, []
                    for f in files:
                        r, c = _run_one(fn, str(f), args)
                        r["exit_code"] = c
                        results[f.name] = r
                        codes.append(c)
                    body, code = {"batch": results}, max(codes, default=EXIT_OK)
            elif args.input is None:
                body, code = _error(MalformedInput("an input file or --batch is required"), EXIT_MALFORMED), EXIT_MALFORMED
            else:
                body, code = _run_one(fn, args.input, args)
        elif args.command == "check-congruent":
            body, code = _run_one(cmd_check_congruent, args)
        elif args.command == "check-sympl-similar":
            body, code = _run_one(cmd_check_sympl_similar, args)
        else:
            body, code = _run_one(cmd_verify_suite, args)

    if args.command == "gen" and code == EXIT_OK:
        report = body
    else:
        report = {"version": __version__, "command": args.command, **body}
    return report, code


def main(argv=None) -> int:
    report, code = run(argv)
    text = dumps(report) + "\n"
    out = None
    try:
        out = getattr(parse_out(argv), "out", None)
    except SystemExit:
        out = None
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            sys.stderr.write(f"sympcanon: cannot write {out}: {exc.strerror}\n")
            return EXIT_MALFORMED
    else:
        sys.stdout.write(text)
    if code and "error" in report:
        sys.stderr.write(f"sympcanon: {report['error']['type']}: {report['error']['message']}\n")
    return code


def parse_out(argv):
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--out")
    ns, _ = p.parse_known_args(argv)
    return ns


if __name__ == "__main__":
    sys.exit(main())
