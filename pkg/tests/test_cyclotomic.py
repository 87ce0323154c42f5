import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qelliptic.cyclotomic import Cyclotomic, cyclotomic_polynomial, euler_phi


def test_fourth_roots_cancel():
    assert Cyclotomic.root(4, 1) + Cyclotomic.root(4, 3) == Cyclotomic.zero()


def test_third_roots_sum_to_minus_one():
    # oracle: minimal polynomial 1 + x + x^2 of zeta_3
    assert Cyclotomic.root(3, 1) + Cyclotomic.root(3, 2) == Cyclotomic.rational(-1)


def test_eval_numeric_eighth_root():
    v = Cyclotomic.root(8).eval_numeric()
    assert abs(v - cmath.exp(2j * cmath.pi / 8)) < 1e-12


def test_conductor_is_minimal():
    assert Cyclotomic.root(6).m == 3          # Q(zeta_6) = Q(zeta_3)
    assert Cyclotomic.root(4, 2).m == 1       # zeta_4^2 = -1
    assert (Cyclotomic.root(5) * 0).m == 1
    assert Cyclotomic.root(12, 3).m == 4      # zeta_12^3 = i


def test_phi_and_cyclotomic_polynomials():
    assert [euler_phi(m) for m in (1, 2, 3, 4, 8, 12)] == [1, 1, 2, 2, 4, 4]
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_conjugation_is_complex_conjugation():
    x = Cyclotomic.root(5) + Cyclotomic.root(5, 2) * Fraction(3, 7)
    assert abs(x.conjugate().eval_numeric() - x.eval_numeric().conjugate()) < 1e-12
    assert x.conjugate().conjugate() == x


def test_rational_arithmetic_shortcuts():
    x = Cyclotomic.rational(Fraction(2, 3))
    assert (x + Fraction(1, 3)) == Cyclotomic.one()
    assert (x * 3).rational_value() == 2
    assert (x / Fraction(2, 3)) == Cyclotomic.one()


def test_from_qz_matches_roots():
    assert Cyclotomic.from_qz(Fraction(1, 2)) == Cyclotomic.rational(-1)
    assert Cyclotomic.from_qz(Fraction(1, 4)) == Cyclotomic.root(4)
    assert Cyclotomic.from_qz(Fraction(0)) == Cyclotomic.one()


small_elements = st.builds(
    lambda m, entries: Cyclotomic(m, {r % m: Fraction(num, den) for (r, num, den) in entries}),
    st.sampled_from([1, 2, 3, 4, 5, 6, 8, 12]),
    st.lists(st.tuples(st.integers(0, 11), st.integers(-4, 4), st.integers(1, 4)),
             min_size=0, max_size=3),
)


@settings(max_examples=150, deadline=None)
@given(small_elements, small_elements, small_elements)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + Cyclotomic.zero() == a
    assert a * Cyclotomic.one() == a


@settings(max_examples=100, deadline=None)
@given(small_elements, small_elements)
def test_numeric_homomorphism(a, b):
    assert abs((a + b).eval_numeric() - (a.eval_numeric() + b.eval_numeric())) < 1e-9
    assert abs((a * b).eval_numeric() - (a.eval_numeric() * b.eval_numeric())) < 1e-9


@settings(max_examples=100, deadline=None)
@given(small_elements)
def test_canonical_form_is_stable(a):
    again = Cyclotomic(a.m, a.coeffs)
    assert again == a and again.m == a.m


def test_json_round_trip():
    x = Cyclotomic.root(8) + Cyclotomic.root(8, 3) * Fraction(-2, 5)
    assert Cyclotomic.from_json(x.to_json()) == x


def test_galois_requires_coprime():
    with pytest.raises(ValueError):
        Cyclotomic.root(4).galois(2)
