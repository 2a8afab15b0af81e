"""``utpoly`` command line.

Exit codes: 0 member / success, 1 non-member / verification failures,
2 usage or input error, 3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .decision import (ProblemConfig, characterize, is_iv_scalar, is_member_matrix_reduction,
                       is_member_matrix_structural, is_null_scalar_brute, is_null_scalar_windowed)
from .enumeration import DEFAULT_BUDGET
from .errors import BudgetExceeded, UtpolyError
from .pathpoly import path_poly
from .poly import parse_poly
from .ring import RingSpec
from .structures import iv_generators, null_basis, verify_ideal_closure, verify_ring_closure
from .triangular import MatrixPoly, UTMatrix, scalar_subst, subst_left, subst_right
from .verify import (verify_oracle_equivalence, verify_power_identity, verify_summation_identities,
                     verify_windowed_equivalence)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _ring(text: str) -> RingSpec:
    try:
        return RingSpec.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--json", action="store_true", help="print a JSON object on stdout")
    g.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET,
                   help=f"max evaluation points per decision (default {DEFAULT_BUDGET})")
    g.add_argument("--force", action="store_true", help="ignore the enumeration budget")
    g.add_argument("--threads", type=_positive, default=1, help="worker threads (results do not change)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="utpoly",
        description="Polynomial functions on upper triangular matrix algebras.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("pathpoly", parents=[common], help="print a path polynomial p_ij^(k)")
    p.add_argument("--from", dest="i", type=_positive, required=True)
    p.add_argument("--to", dest="j", type=_positive, required=True)
    p.add_argument("--length", dest="k", type=_nonneg, required=True)
    p.add_argument("--ring", type=_ring, default=RingSpec.integers())

    p = sub.add_parser("eval", parents=[common], help="substitute a matrix into a polynomial")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--poly", help="scalar polynomial text (use with --ring)")
    src.add_argument("--file", type=Path, help="matrix polynomial JSON file")
    p.add_argument("--ring", type=_ring, default=RingSpec.rationals())
    p.add_argument("--matrix", required=True, help="UTMatrix JSON array or a path to one")
    p.add_argument("--side", choices=("right", "left"), default="right")

    check = sub.add_parser("check", help="decide membership")
    csub = check.add_subparsers(dest="what", required=True)
    p = csub.add_parser("null", parents=[common], help="scalar null polynomial on T_n(Z/m)")
    p.add_argument("--mod", type=int, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--poly", required=True)
    p.add_argument("--ideal", type=_nonneg, default=0, help="target ideal (t) of Z/m (default 0)")
    p.add_argument("--method", choices=("windowed", "brute"), default="windowed")
    p = csub.add_parser("iv", parents=[common], help="scalar integer-valued polynomial on T_n(Z)")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--poly", required=True)
    p.add_argument("--method", choices=("reduction", "brute"), default="reduction")
    p = csub.add_parser("matrix", parents=[common], help="polynomial with T_n coefficients")
    p.add_argument("--side", choices=("right", "left"), default="right")
    p.add_argument("--mode", choices=("iv", "null", "finite"), required=True)
    p.add_argument("--mod", type=int)
    p.add_argument("--ideal", type=_nonneg, default=0)
    p.add_argument("--file", type=Path, required=True)
    p.add_argument("--method", choices=("structural", "reduction"), default="structural")

    p = sub.add_parser("characterize", parents=[common], help="entry-wise membership shape")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--side", choices=("right", "left"), default="right")
    p.add_argument("--mode", choices=("iv", "null"), default="iv")

    basis = sub.add_parser("basis", help="degree-bounded bases")
    bsub = basis.add_subparsers(dest="what", required=True)
    p = bsub.add_parser("null", parents=[common], help="null polynomials on T_n(Z/p)")
    p.add_argument("--mod", type=int, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--max-degree", type=_nonneg, required=True)
    p = bsub.add_parser("iv", parents=[common], help="integer-valued generators g/d")
    p.add_argument("--den", type=int, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--max-degree", type=_nonneg, required=True)

    verify = sub.add_parser("verify", help="randomized and exhaustive verification runs")
    vsub = verify.add_subparsers(dest="what", required=True)

    def run_opts(p, trials, seed):
        p.add_argument("--trials", type=_nonneg, default=trials)
        p.add_argument("--seed", type=int, default=seed)
        p.add_argument("--timing", action="store_true", help="add elapsed_ms to the report")

    p = vsub.add_parser("ideal", parents=[common], help="null sets are ideals")
    p.add_argument("--mod", type=int, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--max-degree", type=_nonneg, required=True)
    p.add_argument("--side", choices=("right", "left", "both"), default="both")
    run_opts(p, 100, 42)
    p = vsub.add_parser("ring", parents=[common], help="integer-valued sets are rings")
    p.add_argument("--den", type=int, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--max-degree", type=_nonneg, required=True)
    p.add_argument("--side", choices=("right", "left", "both"), default="both")
    run_opts(p, 100, 7)
    p = vsub.add_parser("power", parents=[common], help="matrix powers vs path polynomials")
    p.add_argument("--mod", type=int, default=5)
    p.add_argument("--n", type=_positive, default=4)
    p.add_argument("--max-power", type=_nonneg, default=6)
    run_opts(p, 500, 0)
    p = vsub.add_parser("summation", parents=[common], help="row/column summation identities")
    p.add_argument("--mod", type=int, default=3)
    p.add_argument("--n", type=_positive, default=3)
    p.add_argument("--max-degree", type=_nonneg, default=3)
    run_opts(p, 200, 0)
    p = vsub.add_parser("oracle", parents=[common], help="structural vs reduction verdicts")
    run_opts(p, 500, 0)
    p = vsub.add_parser("windowed", parents=[common], help="windowed vs brute-force null checks")
    p.add_argument("--timing", action="store_true")
    return parser


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        print(json.dumps(payload))
        print(human, file=sys.stderr)
    else:
        print(human)


def _load_matrix(text: str, ring: RingSpec) -> UTMatrix:
    s = text.strip()
    data = json.loads(s) if s.startswith("[") else json.loads(Path(s).read_text())
    return UTMatrix.from_json(data, ring)


def _verdict_exit(args, verdict) -> int:
    _emit(args, verdict.to_json(), verdict.summary())
    return EXIT_OK if verdict.member else EXIT_FAIL


def _report_exit(args, report: dict) -> int:
    human = f"{report['check']}: {report['checks']} checks, {report['failures']} failures"
    if report.get("seed") is not None:
        human += f" (seed {report['seed']})"
    _emit(args, report, human)
    return EXIT_OK if report["failures"] == 0 else EXIT_FAIL


def _sides(choice: str) -> tuple[str, ...]:
    return ("right", "left") if choice == "both" else (choice,)


def dispatch(args) -> int:
    budget = None if args.force else args.budget
    kw = {"budget": budget, "threads": args.threads}

    if args.verb == "pathpoly":
        p = path_poly(args.i, args.j, args.k, args.ring)
        _emit(args, {"schema_version": 1, "from": args.i, "to": args.j, "length": args.k,
                     "polynomial": str(p), "terms": len(p.terms)}, str(p))
        return EXIT_OK

    if args.verb == "eval":
        if args.poly is not None:
            f = parse_poly(args.poly, args.ring)
            c = _load_matrix(args.matrix, f.ring)
            value = scalar_subst(f, c)
        else:
            f = MatrixPoly.from_json(args.file.read_text())
            c = _load_matrix(args.matrix, f.ring)
            value = subst_right(f, c) if args.side == "right" else subst_left(f, c)
        _emit(args, {"schema_version": 1, "value": value.to_json()}, str(value))
        return EXIT_OK

    if args.verb == "check":
        if args.what == "null":
            f = parse_poly(args.poly, RingSpec.modular(args.mod))
            fn = is_null_scalar_windowed if args.method == "windowed" else is_null_scalar_brute
            return _verdict_exit(args, fn(f, args.n, ideal=args.ideal, **kw))
        if args.what == "iv":
            f = parse_poly(args.poly, RingSpec.rationals())
            if args.method == "reduction":
                return _verdict_exit(args, is_iv_scalar(f, args.n, **kw))
            v = is_member_matrix_reduction(MatrixPoly.from_scalar(f, args.n),
                                           ProblemConfig("iv", args.n), **kw)
            return _verdict_exit(args, v)
        f = MatrixPoly.from_json(args.file.read_text())
        if args.mode == "iv":
            cfg = ProblemConfig("iv", f.n, args.side)
        else:
            if args.mod is None:
                raise UtpolyError(f"--mode {args.mode} needs --mod")
            cfg = ProblemConfig(args.mode, f.n, args.side, args.mod, args.ideal)
        fn = is_member_matrix_structural if args.method == "structural" else is_member_matrix_reduction
        return _verdict_exit(args, fn(f, cfg, **kw))

    if args.verb == "characterize":
        shape = characterize(args.n, args.side, args.mode)
        width = max(len(s) for row in shape for s in row)
        human = "\n".join("  ".join(s.ljust(width) for s in row).rstrip() for row in shape)
        _emit(args, {"schema_version": 1, "n": args.n, "side": args.side, "mode": args.mode,
                     "shape": shape}, human)
        return EXIT_OK

    if args.verb == "basis":
        if args.what == "null":
            nb = null_basis(args.mod, args.n, args.max_degree, budget=budget)
            polys = nb.basis
            extra = {"modulus": nb.modulus, "rank": nb.rank}
        else:
            polys = iv_generators(args.n, args.den, args.max_degree, budget=budget)
            extra = {"denominator": args.den}
        _emit(args, {"schema_version": 1, "n": args.n, "max_degree": args.max_degree, **extra,
                     "basis": [str(p) for p in polys]}, "\n".join(str(p) for p in polys))
        return EXIT_OK

    run = {"threads": args.threads, "timing": args.timing}
    if args.what == "ideal":
        report = verify_ideal_closure(args.mod, args.n, args.max_degree, args.trials, args.seed,
                                      sides=_sides(args.side), budget=budget, **run)
    elif args.what == "ring":
        report = verify_ring_closure(args.n, args.den, args.max_degree, args.trials, args.seed,
                                     sides=_sides(args.side), budget=budget, **run)
    elif args.what == "power":
        report = verify_power_identity(args.trials, args.n, args.mod, args.max_power, args.seed, **run)
    elif args.what == "summation":
        report = verify_summation_identities(args.trials, args.n, args.mod, args.max_degree,
                                             args.seed, **run)
    elif args.what == "oracle":
        report = verify_oracle_equivalence(args.trials, args.seed, budget=budget, **run)
    else:
        report = verify_windowed_equivalence(budget=budget, **run)
    return _report_exit(args, report)


def _bind_poly(argv: list[str]) -> list[str]:
    """Turn ``--poly -x^2`` into ``--poly=-x^2`` so argparse does not read a
    leading minus sign as an option."""
    out, k = [], 0
    while k < len(argv):
        if argv[k] == "--poly" and k + 1 < len(argv):
            out.append(f"--poly={argv[k + 1]}")
            k += 2
        else:
            out.append(argv[k])
            k += 1
    return out


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = _bind_poly(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    try:
        return dispatch(args)
    except BudgetExceeded as e:
        print(f"utpoly: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (UtpolyError, ValueError, TypeError, OSError, json.JSONDecodeError) as e:
        print(f"utpoly: error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
