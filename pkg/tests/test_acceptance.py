"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line (visible even under pytest's
output capture) with its runtime and limit. Run directly with
``python tests/test_acceptance.py`` for just the summary lines.
"""

from __future__ import annotations

import itertools
import json
import sys
import time
from contextlib import redirect_stderr, redirect_stdout
from io import StringIO
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import is_null_brute  # noqa: E402
from utpoly.cli import run  # noqa: E402
from utpoly.decision import (ProblemConfig, is_iv_scalar, is_member_matrix_reduction,  # noqa: E402
                             is_member_matrix_structural)
from utpoly.pathpoly import path_poly  # noqa: E402
from utpoly.poly import UniPoly, parse_poly  # noqa: E402
from utpoly.ring import RingSpec  # noqa: E402
from utpoly.structures import null_basis  # noqa: E402
from utpoly.triangular import MatrixPoly, phi_inv, scalar_subst, subst_right  # noqa: E402
from utpoly.verify import (verify_oracle_equivalence, verify_power_identity,  # noqa: E402
                           verify_summation_identities, verify_windowed_equivalence)

Q = RingSpec.rationals()

_terminal = None


def report(number: int, title: str, ok: bool, seconds: float, limit: float, detail: str = "") -> None:
    status = "PASS" if ok and seconds < limit else "FAIL"
    line = f"[{status}] criterion {number:>2}: {title} ({seconds:.2f}s, limit {limit:g}s)"
    if detail:
        line += f" - {detail}"
    if _terminal is not None:
        with _terminal.disabled():
            print(line)
    else:
        print(line)
    assert ok, line
    assert seconds < limit, line


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    global _terminal
    _terminal = capsys
    yield
    _terminal = None


def cli_json(*argv: str) -> tuple[int, str]:
    buf = StringIO()
    with redirect_stdout(buf), redirect_stderr(StringIO()):
        code = run(list(argv) + ["--json"])
    return code, buf.getvalue()


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


EXPECTED_PATH_2_4 = [
    set(),
    {"x_{2,4}"},
    {"x_{2,2}*x_{2,4}", "x_{2,3}*x_{3,4}", "x_{2,4}*x_{4,4}"},
    {"x_{2,2}^2*x_{2,4}", "x_{2,2}*x_{2,3}*x_{3,4}", "x_{2,2}*x_{2,4}*x_{4,4}",
     "x_{2,3}*x_{3,3}*x_{3,4}", "x_{2,3}*x_{3,4}*x_{4,4}", "x_{2,4}*x_{4,4}^2"},
]


def test_criterion_01_path_polynomials():
    def terms():
        out = []
        for k in range(4):
            p = path_poly(2, 4, k)
            out.append(set() if p.is_zero() else set(str(p).split(" + ")))
        return out

    got, secs = timed(terms)
    report(1, "path_poly(2,4,k), k=0..3, exact term sets", got == EXPECTED_PATH_2_4, secs, 1)


def test_criterion_02_power_identity():
    r, secs = timed(lambda: verify_power_identity(trials=500, n=4, m=5, max_power=6, seed=0))
    report(2, "[C^k]_ij = p_ij^(k)(C), 500 C in T_4(Z/5), k<=6", r["failures"] == 0, secs, 10,
           f"{r['checks']} checks, {r['failures']} failures")


def test_criterion_03_summation_identities():
    r, secs = timed(lambda: verify_summation_identities(trials=200, n=3, m=3, max_degree=3, seed=0))
    report(3, "row/column summation identities, 200 (f, C) over Z/3, n=3", r["failures"] == 0,
           secs, 10, f"{r['checks']} checks, {r['failures']} failures")


def test_criterion_04_windowed_vs_brute():
    r, secs = timed(verify_windowed_equivalence)
    report(4, "windowed = brute null decision, exhaustive Z/2 deg<=4 n<=3, Z/3 deg<=3 n<=2",
           r["failures"] == 0 and r["checks"] == 32 * 3 + 81 * 2, secs, 60,
           f"{r['checks']} polynomials, {r['failures']} disagreements")


def test_criterion_05_oracle_equivalence():
    r, secs = timed(lambda: verify_oracle_equivalence(random_trials=500, seed=0))
    report(5, "structural = reduction verdicts, Z/2 family + 500 random instances",
           r["failures"] == 0, secs, 300,
           f"{r['checks']} comparisons, {r['failures']} disagreements, "
           f"{r['random_members']} random members")


def test_criterion_06_canonical_facts():
    def check():
        half = parse_poly("1/2*x^2 - 1/2*x", Q)
        square = parse_poly("1/2*x^4 - x^3 + 1/2*x^2", Q)
        ok = []
        for fn in ("structural", "reduction"):
            dec = is_member_matrix_structural if fn == "structural" else is_member_matrix_reduction
            ok.append(dec(MatrixPoly.from_scalar(half, 1), ProblemConfig("iv", 1)).member)
            v = dec(MatrixPoly.from_scalar(half, 2), ProblemConfig("iv", 2))
            w = v.witness
            ok.append(not v.member and subst_right(MatrixPoly.from_scalar(half, 2), w.matrix)[w.entry] == w.value
                      and w.value.value.denominator != 1)
            ok.append(dec(MatrixPoly.from_scalar(square, 2), ProblemConfig("iv", 2)).member)
            zero = UniPoly.zero(Q)
            diag = phi_inv([[half, zero], [zero, zero]], Q)
            ok.append(dec(diag, ProblemConfig("iv", 2, "left")).member)
            r = dec(diag, ProblemConfig("iv", 2, "right"))
            ok.append(not r.member and subst_right(diag, r.witness.matrix)[r.witness.entry] == r.witness.value)
        v = is_iv_scalar(half, 2)
        ok.append(not v.member and scalar_subst(half, v.witness.matrix)[v.witness.entry] == v.witness.value)
        ok.append(is_iv_scalar(half, 1).member and is_iv_scalar(square, 2).member)
        return all(ok), f"{sum(ok)}/{len(ok)} facts"

    (ok, detail), secs = timed(check)
    report(6, "canonical membership facts and left/right asymmetry", ok, secs, 5, detail)


def _closure(number, title, argv):
    (code, out), secs = timed(lambda: cli_json(*argv))
    r = json.loads(out)
    report(number, title, code == 0 and r["failures"] == 0 and set(r["sides"]) == {"right", "left"},
           secs, 120, f"{r['checks']} checks, {r['failures']} failures")


def test_criterion_07_ideal_closure_mod2():
    _closure(7, "null sets are ideals, m=2 (right and left)",
             ["verify", "ideal", "--mod", "2", "--n", "2", "--max-degree", "4", "--trials", "100",
              "--seed", "42"])


def test_criterion_07_ideal_closure_mod3():
    _closure(7, "null sets are ideals, m=3 (right and left)",
             ["verify", "ideal", "--mod", "3", "--n", "2", "--max-degree", "4", "--trials", "100",
              "--seed", "42"])


def test_criterion_08_ring_closure():
    _closure(8, "integer-valued sets are rings, d=2, plus generator inclusion",
             ["verify", "ring", "--den", "2", "--n", "2", "--max-degree", "4", "--trials", "100",
              "--seed", "7"])


def test_criterion_09_null_basis():
    def check():
        nb = null_basis(2, 2, 4)
        sound = all(is_null_brute(list(g.coeffs), 2, 2) for g in nb.basis)
        span = set()
        for cs in itertools.product(range(2), repeat=len(nb.basis)):
            v = [0] * 5
            for c, g in zip(cs, nb.basis):
                for k, a in enumerate(g.coeffs):
                    v[k] = (v[k] + c * a) % 2
            span.add(tuple(v))
        nulls = {cs for cs in itertools.product(range(2), repeat=5) if is_null_brute(list(cs), 2, 2)}
        return sound and nulls <= span, f"basis {[str(g) for g in nb.basis]}, {len(nulls)} null vectors"

    (ok, detail), secs = timed(check)
    report(9, "null_basis(2,2,4) sound and complete", ok, secs, 10, detail)


DETERMINISM_RUNS = {
    2: ["verify", "power", "--trials", "500", "--n", "4", "--mod", "5", "--max-power", "6", "--seed", "0"],
    3: ["verify", "summation", "--trials", "200", "--n", "3", "--mod", "3", "--max-degree", "3",
        "--seed", "0"],
    5: ["verify", "oracle", "--trials", "500", "--seed", "0"],
    7: ["verify", "ideal", "--mod", "2", "--n", "2", "--max-degree", "4", "--trials", "100", "--seed", "42"],
    8: ["verify", "ring", "--den", "2", "--n", "2", "--max-degree", "4", "--trials", "100", "--seed", "7"],
}


def test_criterion_10_determinism():
    def check():
        same = []
        for argv in DETERMINISM_RUNS.values():
            a = cli_json(*argv, "--threads", "1")
            b = cli_json(*argv, "--threads", "8")
            same.append(a == b and a[1].encode() == b[1].encode())
        return all(same), f"{sum(same)}/{len(same)} reports byte-identical"

    (ok, detail), secs = timed(check)
    report(10, "threads 1 vs 8 give byte-identical JSON (criteria 2,3,5,7,8)", ok, secs, 600, detail)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
