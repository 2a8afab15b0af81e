import json
from fractions import Fraction
import random
import subprocess
import sys

import pytest

from utpoly.cli import run
from utpoly.poly import UniPoly
from utpoly.ring import RingSpec
from utpoly.triangular import MatrixPoly, UTMatrix


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_pathpoly(capsys):
    code, out, _ = call(capsys, "pathpoly", "--from", "2", "--to", "4", "--length", "2")
    assert code == 0
    assert out.strip() == "x_{2,2}*x_{2,4} + x_{2,3}*x_{3,4} + x_{2,4}*x_{4,4}"


def test_check_iv_json(capsys):
    code, out, err = call(capsys, "check", "iv", "--n", "2", "--poly", "1/2*x^2 - 1/2*x", "--json")
    assert code == 1
    data = json.loads(out)
    assert data["schema_version"] == 1 and data["decision"] == "NonMember"
    assert data["witness"]["entry"] == [1, 2]
    assert "NonMember" in err


def test_check_null_member(capsys):
    code, out, _ = call(capsys, "check", "null", "--mod", "2", "--n", "1", "--poly", "x^2 + x")
    assert code == 0 and out.startswith("Member")


def test_check_matrix_file(tmp_path, capsys):
    q = RingSpec.rationals()
    half = UniPoly(q, [0, Fraction(-1, 2), Fraction(1, 2)])
    f = MatrixPoly(q, 2, tuple(UTMatrix.from_entries(q, 2, {(1, 1): c}) for c in half.coeffs))
    path = tmp_path / "f.json"
    path.write_text(json.dumps(f.to_json()))
    assert call(capsys, "check", "matrix", "--side", "left", "--mode", "iv", "--file", str(path))[0] == 0
    for method in ("structural", "reduction"):
        code, _, _ = call(capsys, "check", "matrix", "--side", "right", "--mode", "iv",
                          "--file", str(path), "--method", method)
        assert code == 1


def test_usage_and_parse_errors(capsys):
    assert call(capsys, "check", "null", "--mod", "2", "--n", "1", "--poly", "x + + 1")[0] == 2
    assert call(capsys, "check", "null", "--mod", "1", "--n", "1", "--poly", "x")[0] == 2
    assert call(capsys, "check", "bogus")[0] == 2
    assert call(capsys, "pathpoly", "--from", "0", "--to", "1", "--length", "1")[0] == 2
    assert call(capsys, "check", "matrix", "--mode", "null", "--file", "/nonexistent.json")[0] == 2


def test_budget_exit_code(capsys):
    argv = ["check", "null", "--mod", "3", "--n", "5", "--poly", "x^2", "--method", "brute"]
    code, _, err = call(capsys, *argv, "--budget", "1000")
    assert code == 3 and "budget" in err


def test_basis_and_characterize(capsys):
    code, out, _ = call(capsys, "basis", "null", "--mod", "2", "--n", "2", "--max-degree", "4")
    assert code == 0 and out.splitlines() == ["x^4 + x^2"]
    code, out, _ = call(capsys, "characterize", "--n", "2", "--side", "right", "--mode", "iv", "--json")
    assert json.loads(out)["shape"] == [["Int^{T2}", "Int^{T1}"], ["zero", "Int^{T1}"]]


def test_eval(capsys):
    code, out, _ = call(capsys, "eval", "--poly", "x^2", "--ring", "Z", "--matrix", '[["1","2"],["0","3"]]',
                        "--json")
    assert code == 0 and json.loads(out)["value"] == [["1", "8"], ["0", "9"]]


def test_verify_reports_are_deterministic(capsys):
    argv = ["verify", "ideal", "--mod", "2", "--n", "2", "--max-degree", "4", "--trials", "5",
            "--seed", "3", "--json"]
    a = call(capsys, *argv, "--threads", "1")
    b = call(capsys, *argv, "--threads", "4")
    assert a[0] == b[0] == 0 and a[1] == b[1]
    assert "elapsed_ms" not in json.loads(a[1])
    assert "elapsed_ms" in json.loads(call(capsys, *argv, "--timing")[1])


def test_exit_code_agrees_with_json(capsys):
    rng = random.Random(2024)
    seen = set()
    for _ in range(200):
        if rng.random() < 0.5:
            m = rng.choice([2, 3])
            n = rng.randint(1, 2)
            cs = [rng.randrange(m) for _ in range(rng.randint(1, 5))]
            text = str(UniPoly(RingSpec.modular(m), cs))
            argv = ["check", "null", "--mod", str(m), "--n", str(n), "--poly", text]
        else:
            d = rng.choice([1, 2, 3])
            cs = [Fraction(rng.randint(-3, 3), d) for _ in range(rng.randint(1, 4))]
            text = str(UniPoly(RingSpec.rationals(), cs))
            argv = ["check", "iv", "--n", str(rng.randint(1, 2)), "--poly", text]
        code, out, _ = call(capsys, *argv, "--json")
        decision = json.loads(out)["decision"]
        assert code == {"Member": 0, "NonMember": 1}[decision]
        seen.add(decision)
    assert seen == {"Member", "NonMember"}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "utpoly", "pathpoly", "--from", "1", "--to", "2",
                           "--length", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "x_{1,2}"


def test_leading_minus_in_poly(capsys):
    code, out, _ = call(capsys, "check", "iv", "--n", "1", "--poly", "-1/2*x^2 + 1/2*x")
    assert code == 0
