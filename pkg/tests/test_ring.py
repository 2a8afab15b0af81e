from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from utpoly.errors import BadModulus, RingMismatch, ZeroDenominator
from utpoly.ring import (RingSpec, embed_integer, ideal_generator, int_to_mod, is_prime, rat_canon,
                         ring_arith)

Z, Q = RingSpec.integers(), RingSpec.rationals()


def test_parse_and_str_round_trip():
    for text in ("Z", "Q", "Zmod:7", "Zmod:12"):
        assert str(RingSpec.parse(text)) == text
    for bad in ("Zmod:1", "Zmod:0", "Zmod:x", "R", f"Zmod:{2**63}"):
        with pytest.raises(ValueError):
            RingSpec.parse(bad)


def test_rat_canon_reduces_and_rejects_zero_den():
    assert rat_canon(6, -4).value == Fraction(-3, 2)
    with pytest.raises(ZeroDenominator):
        rat_canon(1, 0)


def test_int_to_mod():
    assert int_to_mod(-1, 5).value == 4
    with pytest.raises(BadModulus):
        int_to_mod(3, 1)


def test_mixed_kinds_refused():
    with pytest.raises(RingMismatch):
        ring_arith(Z.elem(1), Q.elem(1), "+")
    with pytest.raises(RingMismatch):
        RingSpec.modular(3).elem(1) + RingSpec.modular(5).elem(1)
    assert embed_integer(Z.elem(3)) == Q.elem(3)


def test_integers_reject_proper_fractions():
    with pytest.raises(ValueError):
        Z.normalize(Fraction(1, 2))


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(2, 30))
def test_mod_arithmetic_matches_python(a, b, m):
    R = RingSpec.modular(m)
    assert (R.elem(a) * R.elem(b)).value == a * b % m
    assert (R.elem(a) - R.elem(b)).value == (a - b) % m


def test_ideal_generators():
    assert ideal_generator(0, 12) == 12
    assert ideal_generator(8, 12) == 4
    assert [p for p in range(20) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_parse_elem():
    assert Q.parse_elem("-3/6") == Fraction(-1, 2)
    assert RingSpec.modular(5).parse_elem("7") == 2
    with pytest.raises(ValueError):
        Z.parse_elem("1/2")
