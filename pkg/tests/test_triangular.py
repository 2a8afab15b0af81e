import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import eval_matrix_poly, eval_scalar, matpow
from utpoly.errors import BadInterval, DimMismatch, NotUpperTriangular, RingMismatch
from utpoly.poly import UniPoly, parse_poly
from utpoly.randgen import random_matrixpoly, random_utmatrix, trial_rng
from utpoly.ring import RingSpec
from utpoly.triangular import (MatrixPoly, UTMatrix, matrices, phi, phi_inv, powers, restrict,
                               scalar_subst, subst_left, subst_right, upper_positions)
from utpoly.verify import summation_identity_failures

Z, Q = RingSpec.integers(), RingSpec.rationals()
Z5 = RingSpec.modular(5)


def as_lists(c: UTMatrix):
    return [list(r) for r in c.rows]


def test_from_json_rejects_lower_entries():
    with pytest.raises(NotUpperTriangular):
        UTMatrix.from_json([["1", "0"], ["1", "1"]], Z)
    with pytest.raises(DimMismatch):
        UTMatrix.from_json([["1", "0"], ["0"]], Z)


def test_json_round_trip():
    c = UTMatrix.from_entries(Q, 3, {(1, 2): Fraction(1, 2), (3, 3): -4})
    assert UTMatrix.from_json(json.loads(json.dumps(c.to_json())), Q) == c
    f = MatrixPoly(Q, 3, (c, c * c))
    assert MatrixPoly.from_json(json.dumps(f.to_json())) == f


def test_phi_example():
    # (1 + x) on the diagonal, x in the corner, as one matrix polynomial
    f = MatrixPoly(Z, 2, (UTMatrix.from_entries(Z, 2, {(1, 1): 1, (2, 2): 1}),
                          UTMatrix.from_entries(Z, 2, {(1, 1): 1, (1, 2): 1, (2, 2): 1})))
    grid = phi(f)
    assert str(grid[0][0]) == "x + 1" and str(grid[0][1]) == "x" and grid[1][0].is_zero()
    assert phi_inv(grid) == f


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_phi_is_a_ring_isomorphism(seed):
    rng = trial_rng(seed, 0)
    f = random_matrixpoly(rng, Z5, 3, 3)
    g = random_matrixpoly(rng, Z5, 3, 3)
    assert phi_inv(phi(f)) == f
    pf, pg, pfg = phi(f), phi(g), phi(f * g)
    for i in range(3):
        for j in range(3):
            conv = UniPoly.zero(Z5)
            for h in range(3):
                conv = conv + pf[i][h] * pg[h][j]
            assert pfg[i][j] == conv
            assert phi(f + g)[i][j] == pf[i][j] + pg[i][j]


def test_phi_inv_rejects_lower_entries():
    x = UniPoly.x(Z)
    with pytest.raises(NotUpperTriangular):
        phi_inv([[x, x], [x, x]])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["right", "left"]))
def test_substitution_matches_list_oracle(seed, side):
    rng = trial_rng(seed, 1)
    f = random_matrixpoly(rng, Z5, 3, 4)
    c = random_utmatrix(rng, Z5, 3)
    got = subst_right(f, c) if side == "right" else subst_left(f, c)
    want = eval_matrix_poly([as_lists(F) for F in f.coeffs], as_lists(c), side, 5)
    assert as_lists(got) == want


def test_scalar_subst_small_example():
    c = UTMatrix.from_json([["1", "2"], ["0", "3"]], Z)
    assert scalar_subst(parse_poly("x^2", Z), c).to_json() == [["1", "8"], ["0", "9"]]
    f = parse_poly("1/2*x^2 - 1/2*x", Q)
    assert scalar_subst(f, c.to_ring(Q))[1, 2].value == Fraction(3)
    assert as_lists(scalar_subst(parse_poly("x^3 + 2", Z), c)) == eval_scalar([2, 0, 0, 1], as_lists(c))


def test_right_and_left_differ():
    e12 = UTMatrix.from_entries(Z, 2, {(1, 2): 1})
    e11 = UTMatrix.from_entries(Z, 2, {(1, 1): 1})
    f = MatrixPoly(Z, 2, (UTMatrix.zero(Z, 2), e11))  # e11 * x
    assert subst_right(f, e12) == e12
    assert subst_left(f, e12).is_zero()


def test_subst_guards():
    f = MatrixPoly.from_scalar(UniPoly.x(Z), 2)
    with pytest.raises(DimMismatch):
        subst_right(f, UTMatrix.identity(Z, 3))
    with pytest.raises(RingMismatch):
        subst_right(f, UTMatrix.identity(Q, 2))


def test_powers_and_restrict():
    c = random_utmatrix(trial_rng(3, 3), Z, 4)
    ps = powers(c, 5)
    assert [as_lists(p) for p in ps] == [matpow(as_lists(c), k) for k in range(6)]
    r = restrict(c, 2, 3)
    assert set(r.entries()) <= {(2, 2), (2, 3), (3, 3)}
    with pytest.raises(BadInterval):
        restrict(c, 3, 2)


def test_matrices_enumerates_in_order():
    ms = list(matrices(RingSpec.modular(2), 2))
    assert len(ms) == 8
    assert ms[1].entries() == {(2, 2): 1}  # last entry varies fastest
    assert upper_positions(2) == [(1, 1), (1, 2), (2, 2)]


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_summation_identities(seed):
    rng = trial_rng(seed, 2)
    ring = RingSpec.modular(3)
    assert summation_identity_failures(random_matrixpoly(rng, ring, 3, 3),
                                       random_utmatrix(rng, ring, 3)) == []


def test_denominator():
    f = MatrixPoly(Q, 2, (UTMatrix.from_entries(Q, 2, {(1, 2): Fraction(1, 4)}),
                          UTMatrix.from_entries(Q, 2, {(1, 1): Fraction(5, 6)})))
    assert f.denominator() == 12
