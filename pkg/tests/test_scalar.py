from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from toroidal_yangian.scalar import (
    BadBinomial,
    ExpOfUnit,
    FieldElem,
    HSeries,
    NonUnitDivision,
    TruncMismatch,
    as_scalar,
    exp_series,
    hseries_arith,
    q_power,
    quantum_binomial,
    quantum_integer,
    scalar_from_json,
    scalar_to_json,
    sqrt_rational,
)

D = 4
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)
field_elems = st.builds(FieldElem, rationals, rationals, rationals, rationals)
series = st.lists(rationals, min_size=D + 1, max_size=D + 1).map(lambda cs: HSeries(cs, D))


def taylor_exp(x, n):
    # independent oracle: the exponential series term by term
    return [Fraction(x) ** k / factorial(k) for k in range(n + 1)]


def test_field_multiplication_table():
    r2, r3 = FieldElem(0, 1), FieldElem(0, 0, 1)
    assert r2 * r2 == 2
    assert r3 * r3 == 3
    assert r2 * r3 == FieldElem(0, 0, 0, 1)
    assert FieldElem(0, 0, 0, 1) * FieldElem(0, 0, 0, 1) == 6


def test_sqrt_rational_of_symmetrizers():
    for d in (Fraction(1, 2), Fraction(1, 3), Fraction(2), Fraction(3), Fraction(1, 6)):
        s = sqrt_rational(d)
        assert as_scalar(s * s) == d
    assert sqrt_rational(Fraction(1, 4)) == Fraction(1, 2)


@given(field_elems)
def test_nonzero_field_elements_invert(a):
    if a == 0:
        return
    assert a * a.inverse() == 1


@given(field_elems)
def test_field_json_round_trip(a):
    assert scalar_from_json(scalar_to_json(a)) == as_scalar(a)


@given(series, series)
def test_product_with_unit_inverse(a, b):
    if not b.is_unit():
        return
    assert (a * b) * b.inverse() == a


def test_exp_hbar_times_exp_minus_hbar():
    assert q_power(1, D) * q_power(-1, D) == HSeries.one(D)


def test_exp_series_examples():
    assert exp_series(HSeries.zero(D)) == HSeries.one(D)
    assert exp_series(HSeries.hbar(2)).coeffs == (1, 1, Fraction(1, 2))
    half = HSeries([0, Fraction(1, 2), 0], 2)
    assert exp_series(half).coeffs == (1, Fraction(1, 2), Fraction(1, 8))
    with pytest.raises(ExpOfUnit):
        exp_series(HSeries.one(D))


def test_self_division_after_factoring_hbar():
    qd = q_power(1, D) - q_power(-1, D)
    one = qd / qd
    assert one.coeffs[0] == 1 and not any(one.coeffs[1:])


def test_q_plus_q_inverse_as_ratio():
    # (q^2 - q^-2)/(q - q^-1) against exp(2h), exp(h) expanded by hand
    num = HSeries([a - b for a, b in zip(taylor_exp(2, D), taylor_exp(-2, D))], D)
    den = HSeries([a - b for a, b in zip(taylor_exp(1, D), taylor_exp(-1, D))], D)
    ratio = hseries_arith(num, den, "div")
    expect = [a + b for a, b in zip(taylor_exp(1, D), taylor_exp(-1, D))]
    assert list(ratio.coeffs) == expect[: ratio.trunc + 1]
    assert ratio.coeffs[:3] == (2, 0, 1)


def test_division_errors():
    with pytest.raises(NonUnitDivision):
        HSeries.hbar(D) / HSeries.hbar(D, 2)
    with pytest.raises(TruncMismatch):
        HSeries.one(3) + HSeries.one(4)


def test_quantum_integer_two_is_two_cosh(A1):
    two = quantum_integer(2, 1, A1, D)
    cosh = [2 * Fraction(1, factorial(n)) if n % 2 == 0 else 0 for n in range(D + 1)]
    assert list(two.coeffs) == cosh
    assert quantum_integer(0, 1, A1, D).is_zero()
    assert quantum_integer(1, 1, A1, D) == HSeries.one(D)


@pytest.mark.parametrize("n", range(-4, 7))
def test_quantum_integer_constant_term_and_oddness(n, G2):
    for i in G2.nodes:
        qi = quantum_integer(n, i, G2, D)
        assert qi.coeffs[0] == n
        assert quantum_integer(-n, i, G2, D) == -qi


@pytest.mark.parametrize("n", range(0, 6))
def test_quantum_binomial_symmetry(n, C2):
    for k in range(n + 1):
        for i in C2.nodes:
            b = quantum_binomial(n, k, i, C2, D)
            assert b == quantum_binomial(n, n - k, i, C2, D)
            assert b.coeffs[0] == Fraction(factorial(n), factorial(k) * factorial(n - k))
    with pytest.raises(BadBinomial):
        quantum_binomial(2, 3, 0, C2, D)


def test_binomial_two_one_is_q_plus_q_inverse(A1):
    assert quantum_binomial(2, 1, 1, A1, D) == q_power(1, D) + q_power(-1, D)


def test_series_json_round_trip():
    s = HSeries([1, FieldElem(0, 1), Fraction(-2, 3), 0, FieldElem(0, 0, 0, 5)], D)
    assert HSeries.from_json(s.to_json()) == s
