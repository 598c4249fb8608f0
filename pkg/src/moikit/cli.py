"""Batch command-line front end.

Subcommands:

* ``apply``  — evaluate a multiplier on kernels, or an operator integral on
  operators (with optional middle matrices; identity middles by default).
* ``norm``   — run the two-sided norm certification and emit the sandwich
  report (text on stdout, JSON via --out).
* ``derivative-demo`` — compare the operator-integral derivative of a matrix
  function against a central finite difference.

Exit codes: 0 success, 2 unreadable/invalid input or output files,
3 dimension/spectrum/normality mismatches, 4 soundness failure in ``norm``
(an implementation bug, not user error). Output files are written to a
temporary name and renamed, so failures never leave partial files. Same
inputs and seed produce byte-identical outputs. The environment variable
MOIKIT_THREADS caps BLAS parallelism (set before numpy is first imported).
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_MISMATCH = 3
EXIT_UNSOUND = 4


def _cap_threads() -> None:
    cap = os.environ.get("MOIKIT_THREADS")
    if not cap:
        return
    for var in (
        "OMP_NUM_THREADS",
        "OPENBLAS_NUM_THREADS",
        "MKL_NUM_THREADS",
        "NUMEXPR_NUM_THREADS",
        "VECLIB_MAXIMUM_THREADS",
    ):
        os.environ.setdefault(var, cap)


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _paths(arg: str) -> list:
    return [p for p in arg.split(",") if p]


def _load_operator(path):
    """Operator JSON, or a bare matrix that gets decomposed with defaults."""
    from . import jsonio, spectral

    obj = jsonio.load_path(path)
    if isinstance(obj, dict) and "projections" in obj:
        return jsonio.decode_operator(obj)
    return spectral.spectral_decompose(jsonio.decode_matrix(obj))


def _cmd_apply(args) -> int:
    from . import jsonio
    from .moi import moi_apply
    from .schur import apply_multiplier

    import numpy as np

    phi = jsonio.decode_symbol(jsonio.load_path(args.symbol))
    if args.operators:
        ops = [_load_operator(p) for p in _paths(args.operators)]
        if args.kernels:
            xs = [
                jsonio.decode_matrix(jsonio.load_path(p))
                for p in _paths(args.kernels)
            ]
        else:
            d = ops[0].dim if ops else 0
            xs = [np.eye(d, dtype=complex) for _ in range(phi.order - 1)]
        result = moi_apply(phi, ops, xs)
        payload = jsonio.encode_matrix(result)
    else:
        if not args.kernels:
            print("apply needs --kernels or --operators", file=sys.stderr)
            return EXIT_PARSE
        kernels = [
            jsonio.decode_kernel(jsonio.load_path(p))
            for p in _paths(args.kernels)
        ]
        payload = jsonio.encode_kernel(apply_multiplier(phi, kernels))
    text = jsonio.dumps(payload)
    if args.out:
        _write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_norm(args) -> int:
    from . import jsonio
    from .norms import verify_theorem

    phi = jsonio.decode_symbol(jsonio.load_path(args.symbol))
    ranks = None
    if args.ranks:
        ranks = tuple(int(r) for r in args.ranks.split(","))
    report = verify_theorem(
        phi,
        ranks=ranks,
        restarts=args.restarts,
        seed=args.seed,
        tol=args.tol,
        oracle=True if args.oracle else None,
    )
    sys.stdout.write(report.to_text())
    if args.out:
        _write_atomic(args.out, jsonio.dumps(jsonio.encode_report(report)))
    if not report.sound:
        print("soundness violation: lower bound exceeds upper bound",
              file=sys.stderr)
        return EXIT_UNSOUND
    return EXIT_OK


_DEMO_FUNCTIONS = ("exp", "square", "reciprocal-shift")


def _cmd_derivative_demo(args) -> int:
    import numpy as np
    import scipy.linalg

    from . import jsonio
    from .moi import divided_difference_symbol, moi_apply
    from .spectral import spectral_decompose

    paths = _paths(args.operators)
    if len(paths) != 2:
        print("derivative-demo needs --operators A.json,X.json",
              file=sys.stderr)
        return EXIT_PARSE
    a = jsonio.decode_matrix(jsonio.load_path(paths[0]))
    x = jsonio.decode_matrix(jsonio.load_path(paths[1]))
    if np.linalg.norm(a - a.conj().T) > 1e-10 * max(1.0, np.linalg.norm(a)):
        print("derivative-demo requires a Hermitian base matrix",
              file=sys.stderr)
        return EXIT_MISMATCH
    op = spectral_decompose(a)

    shift = 0.0
    if args.function == "exp":
        f, fprime = np.exp, np.exp
        mat_f = scipy.linalg.expm
    elif args.function == "square":
        f, fprime = (lambda t: t * t), (lambda t: 2.0 * t)
        mat_f = lambda m: m @ m
    else:
        shift = 1.0 + max(0.0, -float(np.min(op.spectrum.atoms.real)))
        f = lambda t: 1.0 / (t + shift)
        fprime = lambda t: -1.0 / (t + shift) ** 2
        mat_f = lambda m: np.linalg.inv(m + shift * np.eye(m.shape[0]))

    phi = divided_difference_symbol(f, fprime, op.spectrum)
    derivative = moi_apply(phi, [op, op], [x])
    h = args.step
    fd = (mat_f(a + h * x) - mat_f(a - h * x)) / (2.0 * h)
    denom = max(float(np.linalg.norm(derivative)), 1e-300)
    rel_err = float(np.linalg.norm(derivative - fd)) / denom
    line = (
        f"function={args.function} step={h!r} shift={shift!r} "
        f"relative_error={rel_err!r}\n"
    )
    sys.stdout.write(line)
    if args.out:
        payload = {
            "function": args.function,
            "step": h,
            "shift": shift,
            "relative_error": rel_err,
            "derivative": jsonio.encode_matrix(derivative),
            "finite_difference": jsonio.encode_matrix(fd),
        }
        _write_atomic(args.out, jsonio.dumps(payload))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moikit",
        description="multilinear multiplier evaluation and norm certification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_apply = sub.add_parser("apply", help="evaluate a multiplier or operator integral")
    p_apply.add_argument("--symbol", required=True)
    p_apply.add_argument("--kernels", default="",
                         help="comma-separated kernel files (or middle-matrix "
                              "files with --operators)")
    p_apply.add_argument("--operators", default="",
                         help="comma-separated operator files")
    p_apply.add_argument("--out", default="")

    p_norm = sub.add_parser("norm", help="two-sided norm certification report")
    p_norm.add_argument("--symbol", required=True)
    p_norm.add_argument("--ranks", default="")
    p_norm.add_argument("--restarts", type=int, default=8)
    p_norm.add_argument("--seed", type=int, default=0)
    p_norm.add_argument("--tol", type=float, default=1e-9)
    p_norm.add_argument("--oracle", action="store_true",
                        help="force the exact order-2 oracle")
    p_norm.add_argument("--out", default="")

    p_demo = sub.add_parser(
        "derivative-demo",
        help="operator-integral derivative vs central finite difference",
    )
    p_demo.add_argument("--operators", required=True,
                        help="A.json,X.json (Hermitian base, direction)")
    p_demo.add_argument("--function", choices=_DEMO_FUNCTIONS, default="exp")
    p_demo.add_argument("--step", type=float, default=1e-5)
    p_demo.add_argument("--out", default="")
    return parser


def main(argv=None) -> int:
    _cap_threads()
    args = _build_parser().parse_args(argv)
    from .errors import (
        MoikitError,
        NotNormal,
        ParseError,
        ShapeError,
    )

    handlers = {
        "apply": _cmd_apply,
        "norm": _cmd_norm,
        "derivative-demo": _cmd_derivative_demo,
    }
    try:
        return handlers[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ShapeError, NotNormal, MoikitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
