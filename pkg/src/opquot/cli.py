"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 precondition violation,
3 parse, format or I/O error.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import algebra, oracle
from . import numkernel as nk
from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    InvalidSpec,
    IoError,
    NonFiniteInput,
    NotHermitian,
    NotPositiveSemidefinite,
    ParseError,
    PreconditionViolated,
    QuotientError,
)
from .matrixio import FORMATS, format_matrix, read_matrix, write_matrix
from .quotient import left_quotient, right_quotient
from .verify import verify_left, verify_right

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_PRECONDITION = 2
EXIT_PARSE = 3

SEED_ENV = "OPQUOT_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _matrix_json(m):
    m = np.asarray(m)
    return {
        "rows": m.shape[0],
        "cols": m.shape[1],
        "real": m.real.tolist(),
        "imag": m.imag.tolist(),
    }


def _float_json(x):
    return x if math.isfinite(x) else None


class _Context:
    def __init__(self, args):
        self.args = args
        try:
            self.tol = nk.ToleranceConfig(rank_rel=args.tol_rank, residual_rel=args.tol_residual)
        except ValueError as exc:
            raise UsageError(f"invalid tolerance: {exc}") from None
        self.out = sys.stdout

    def read(self, path):
        return read_matrix(path)

    def emit_matrix(self, m, extra=None):
        """Write ``m`` to --out (or stdout); ``extra`` scalars go alongside."""
        args = self.args
        extra = extra or {}
        if args.json:
            payload = {"result": _matrix_json(m)}
            payload.update({k: _float_json(float(v)) for k, v in extra.items()})
            if args.out:
                write_matrix(m, args.out, args.format)
                payload["out"] = args.out
            print(json.dumps(payload), file=self.out)
            return
        if args.out:
            write_matrix(m, args.out, args.format)
            for k, v in extra.items():
                print(f"{k}: {float(v)!r}", file=self.out)
        else:
            self.out.write(format_matrix(m, args.format or "mm"))
            for k, v in extra.items():
                print(f"{k}: {float(v)!r}", file=sys.stderr)


def cmd_pinv(ctx, args):
    ctx.emit_matrix(nk.pseudoinverse(ctx.read(args.m), ctx.tol))


def cmd_ldiv(ctx, args):
    ctx.emit_matrix(left_quotient(ctx.read(args.a), ctx.read(args.b), ctx.tol).q)


def cmd_rdiv(ctx, args):
    ctx.emit_matrix(right_quotient(ctx.read(args.a), ctx.read(args.b), ctx.tol).q)


def cmd_check(ctx, args):
    x, y = ctx.read(args.x), ctx.read(args.y)
    if args.what == "range":
        value = nk.range_included(x, y, ctx.tol)
        residual = nk.range_inclusion_residual(x, y, ctx.tol)
    elif args.what == "kernel":
        value = nk.kernel_included(x, y, ctx.tol)
        residual = nk.kernel_inclusion_residual(x, y, ctx.tol)
    else:
        value = oracle.mu_bisection(x, y, ctx.tol)
        residual = None
    if args.json:
        payload = {"check": args.what}
        if isinstance(value, bool):
            payload.update(value=value, residual=residual)
        else:
            payload["value"] = _float_json(float(value))
        print(json.dumps(payload), file=ctx.out)
    elif isinstance(value, bool):
        print("true" if value else "false", file=ctx.out)
    else:
        print(repr(float(value)) if math.isfinite(value) else "inf", file=ctx.out)


def cmd_sum_left(ctx, args):
    lq1 = left_quotient(ctx.read(args.a), ctx.read(args.b), ctx.tol)
    lq2 = left_quotient(ctx.read(args.c), ctx.read(args.d), ctx.tol)
    result, defect = algebra.sum_left(lq1, lq2, ctx.tol)
    ctx.emit_matrix(result.q, {"defect": defect})


def cmd_sum_right(ctx, args):
    rq1 = right_quotient(ctx.read(args.a), ctx.read(args.b), ctx.tol)
    rq2 = right_quotient(ctx.read(args.c), ctx.read(args.d), ctx.tol)
    result, defect = algebra.sum_right(rq1, rq2, ctx.tol)
    ctx.emit_matrix(result.q, {"defect": defect})


def _witness(ctx, args, lhs, rhs, builder, measure):
    if args.witness_m or args.witness_n:
        if not (args.witness_m and args.witness_n):
            raise UsageError("--witness-m and --witness-n must be given together")
        return measure(lhs, rhs, ctx.read(args.witness_m), ctx.read(args.witness_n), ctx.tol)
    return builder(lhs, rhs, ctx.tol)


def cmd_prod_left(ctx, args):
    lq1 = left_quotient(ctx.read(args.a), ctx.read(args.b), ctx.tol)
    lq2 = left_quotient(ctx.read(args.c), ctx.read(args.d), ctx.tol)
    w = _witness(ctx, args, lq1, lq2, algebra.auto_witness_left, algebra.witness_left)
    result = algebra.product_left(lq1, lq2, w, ctx.tol)
    ctx.emit_matrix(result.q, {"compatibility_residual": w.compatibility_residual,
                               "kernel_residual": w.kernel_residual})


def cmd_prod_right(ctx, args):
    rq1 = right_quotient(ctx.read(args.a), ctx.read(args.b), ctx.tol)
    rq2 = right_quotient(ctx.read(args.c), ctx.read(args.d), ctx.tol)
    w = _witness(ctx, args, rq1, rq2, algebra.auto_witness_right, algebra.witness_right)
    result = algebra.product_right(rq1, rq2, w, ctx.tol)
    ctx.emit_matrix(result.q, {"compatibility_residual": w.compatibility_residual,
                               "kernel_residual": w.kernel_residual})


def cmd_simplify(ctx, args):
    m, b, a = ctx.read(args.m), ctx.read(args.b), ctx.read(args.a)
    if args.side == "left":
        result = algebra.simplify_left(m, left_quotient(a, b, ctx.tol), ctx.tol)
    else:
        result = algebra.simplify_right(m, right_quotient(a, b, ctx.tol), ctx.tol)
    ctx.emit_matrix(result.q)


def cmd_decompose(ctx, args):
    first, second = algebra.canonical_decomposition(ctx.read(args.a), ctx.tol)
    prefix = args.out_prefix
    ext = "csv" if args.format == "csv" else "mm"
    if prefix:
        for name, lq in (("first", first), ("second", second)):
            write_matrix(lq.q, f"{prefix}{name}.{ext}", args.format)
    if args.json:
        print(json.dumps({"first": _matrix_json(first.q), "second": _matrix_json(second.q)}), file=ctx.out)
    elif not prefix:
        for name, lq in (("first", first), ("second", second)):
            print(f"# {name}", file=ctx.out)
            ctx.out.write(format_matrix(lq.q, args.format or "mm"))


def cmd_verify(ctx, args):
    a, b = ctx.read(args.a), ctx.read(args.b)
    paths = {"A": args.a, "B": args.b}
    run = verify_left if args.mode == "left" else verify_right
    report = run(a, b, ctx.tol, seed=args.seed, trials=args.trials, paths=paths)
    print(report.to_json(), file=ctx.out)
    return EXIT_OK if report.ok else EXIT_VERIFY


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def cmd_gen(ctx, args):
    seed = args.seed if args.seed is not None else _default_seed()
    spec = oracle.InstanceSpec(m=args.m, n=args.n, p=args.p, rank_b=args.rank, seed=seed, mode=args.mode)
    inst = oracle.generate(spec)
    ext = "csv" if args.format == "csv" else "mm"
    written = []
    for name, m in zip("ABCD", inst):
        path = f"{args.out_prefix}{name}.{ext}"
        write_matrix(m, path, args.format)
        written.append(path)
    if args.json:
        print(json.dumps({"mode": args.mode, "seed": seed, "files": written}), file=ctx.out)
    else:
        for path in written:
            print(path, file=ctx.out)


def _common():
    common = _Parser(add_help=False)
    common.add_argument("--tol-rank", type=float, default=argparse.SUPPRESS,
                        help="relative singular-value cutoff (default max(m,n)*eps)")
    common.add_argument("--tol-residual", type=float, default=argparse.SUPPRESS,
                        help="relative residual threshold (default 1e-8)")
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS,
                        help="output matrix format (default: from the --out extension, else mm)")
    common.add_argument("--out", default=argparse.SUPPRESS, help="write the result matrix here")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit machine-readable JSON on stdout")
    return common


def build_parser():
    common = _common()
    parser = _Parser(prog="opquot", description="Left and right quotients of dense matrices.",
                     parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("pinv", cmd_pinv, "Moore-Penrose pseudoinverse")
    p.add_argument("m")
    p = add("ldiv", cmd_ldiv, "left quotient [B\\A] = B^+ A")
    p.add_argument("b")
    p.add_argument("a")
    p = add("rdiv", cmd_rdiv, "right quotient [A/B] = A B^+")
    p.add_argument("a")
    p.add_argument("b")
    p = add("check", cmd_check, "range/kernel inclusion of X in Y, or the majorization constant")
    p.add_argument("what", choices=("range", "kernel", "mu"))
    p.add_argument("x")
    p.add_argument("y")
    p = add("sum-left", cmd_sum_left, "[B\\A] + [D\\C]")
    for name in ("b", "a", "d", "c"):
        p.add_argument(name)
    p = add("sum-right", cmd_sum_right, "[A/B] + [C/D]")
    for name in ("a", "b", "c", "d"):
        p.add_argument(name)
    for name, func, order, text in (
        ("prod-left", cmd_prod_left, ("b", "a", "d", "c"), "[B\\A][D\\C]"),
        ("prod-right", cmd_prod_right, ("a", "b", "c", "d"), "[A/B][C/D]"),
    ):
        p = add(name, func, text + " with a witness pair (M, N)")
        for arg in order:
            p.add_argument(arg)
        p.add_argument("--witness-m")
        p.add_argument("--witness-n")
        p.add_argument("--auto", action="store_true", help="construct the witness pair (default)")
    p = add("simplify", cmd_simplify, "[MB\\MA] (left) or [AM/BM] (right)")
    p.add_argument("side", choices=("left", "right"))
    p.add_argument("m")
    p.add_argument("b")
    p.add_argument("a")
    p = add("decompose", cmd_decompose, "A = [A^*\\A^*A] and A^+ = [A^*A\\A^*]")
    p.add_argument("a")
    p.add_argument("--out-prefix")
    p = add("verify", cmd_verify, "run the invariant suite and print a JSON report")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--mode", choices=("left", "right"), default="left")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)
    p = add("gen", cmd_gen, "write a generated instance")
    p.add_argument("--mode", choices=oracle.MODES, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or 0")
    p.add_argument("--out-prefix", required=True)
    return parser


_DEFAULTS = {"tol_rank": None, "tol_residual": 1e-8, "format": None, "out": None, "json": False}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        for key, value in _DEFAULTS.items():
            if not hasattr(args, key):
                setattr(args, key, value)
        ctx = _Context(args)
        code = args.func(ctx, args)
        return EXIT_OK if code is None else code
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_PARSE
    except (ParseError, IoError, NonFiniteInput, InvalidSpec) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (PreconditionViolated, DimensionMismatch, NotHermitian, NotPositiveSemidefinite) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ConvergenceFailure, QuotientError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
