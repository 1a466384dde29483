from fractions import Fraction
from math import inf

import pytest
from hypothesis import given, strategies as st

from prime_borcherds.errors import PreconditionError, TruncationError
from prime_borcherds.series import (
    FracQSeries,
    dedekind_eta,
    discriminant_delta,
    eisenstein_level1,
    format_series,
    klein_j,
    rescale_variable,
    series_invert,
    series_pow,
    weight_minus2_J,
)

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=6)


@st.composite
def series(draw, den=None, min_len=0):
    n = den or draw(st.sampled_from([1, 2, 5]))
    start = draw(st.integers(-3, 3))
    coeffs = draw(st.lists(fracs, min_size=min_len, max_size=8))
    trunc = Fraction(start + len(coeffs) + draw(st.integers(0, 4)), n)
    terms = {start + k: c for k, c in enumerate(coeffs)}
    return FracQSeries(terms, n, trunc)


@st.composite
def units(draw):
    """Series with nonzero leading coefficient and finite truncation."""
    s = draw(series(min_len=1))
    lead = draw(fracs.filter(bool))
    v = draw(st.integers(-2, 2))
    n = s.exponent_denominator
    terms = {v * n: lead}
    for e, c in s.items():
        terms[v * n + int(e * n) - int((s.valuation() or 0) * n) + 1] = c
    return FracQSeries(terms, n, Fraction(v) + 4)


def test_eta_power_24_is_delta():
    eta = dedekind_eta(12)
    assert series_pow(eta, 24).agrees_with(discriminant_delta(12), 12)


def test_klein_j_coefficients():
    j = klein_j(4)
    assert [j[n] for n in range(-1, 4)] == [1, 744, 196884, 21493760, 864299970]


def test_weight_minus2_J_coefficients():
    # independent oracle: symbolic E4*E6/Delta expansion
    want = [1, -240, -141444, -8529280, -238758390, -4303488384, -57655810840]
    J = weight_minus2_J(6)
    assert [J[n] for n in range(-1, 6)] == want


def test_inverse_of_delta():
    inv = series_invert(discriminant_delta(6))
    assert [inv[n] for n in range(-1, 3)] == [1, 24, 324, 3200]


def test_eisenstein_level1():
    assert eisenstein_level1(4, 3)[2] == 240 * 9
    assert eisenstein_level1(6, 3)[1] == -504
    with pytest.raises(PreconditionError):
        eisenstein_level1(8, 3)


def test_truncation_is_enforced():
    f = FracQSeries({0: 1, 1: 2}, 1, 2)
    assert f[1] == 2
    with pytest.raises(TruncationError):
        f[2]
    with pytest.raises(TruncationError):
        f.truncate(3)


def test_product_truncation_rule():
    a = FracQSeries({-1: 1, 0: 3}, 1, 4)
    b = FracQSeries({2: 1}, 1, 5)
    assert (a * b).truncation_order == min(4 + 2, 5 - 1)


def test_fractional_exponents():
    a = FracQSeries({1: 1}, 5, 2)
    b = FracQSeries({2: 3}, 3, 2)
    c = a * b
    assert c.exponent_denominator == 15
    assert c[Fraction(1, 5) + Fraction(2, 3)] == 3


def test_exact_inverse_needs_order():
    with pytest.raises(PreconditionError):
        series_invert(FracQSeries({0: 1, 1: 1}))
    assert series_invert(FracQSeries({3: 2})) == FracQSeries({-3: Fraction(1, 2)})


def test_rescale_variable():
    a = FracQSeries({-1: 1, 1: 4}, 1, 3)
    b = rescale_variable(a, 5)
    assert b[-5] == 1 and b[5] == 4 and b.truncation_order == 15


def test_format():
    f = FracQSeries({-1: 1, 0: 5, 1: 11}, 1, 2)
    assert format_series(f) == "q^-1 + 5 + 11*q + O(q^2)"


def test_json_infinite_truncation():
    f = FracQSeries({0: Fraction(1, 3)})
    d = f.to_json()
    assert d["truncation_den"] == 0
    assert FracQSeries.from_json(d) == f
    assert f.truncation_order == inf


def test_from_json_rejects_garbage():
    with pytest.raises(ValueError):
        FracQSeries.from_json({"terms": []})
    with pytest.raises(ValueError):
        FracQSeries.from_json({"exponent_denominator": 1, "truncation_num": 1,
                               "truncation_den": 0, "terms": [[0, "1"], [0, "2"]]})


@given(series(), series())
def test_add_commutes(a, b):
    assert a + b == b + a


@given(series(den=1), series(den=1), series(den=1))
def test_mul_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(series(den=1), series(den=1), series(den=1))
def test_distributive(a, b, c):
    lhs = a * (b + c)
    rhs = a * b + a * c
    t = min(lhs.truncation_order, rhs.truncation_order)
    assert lhs.truncate(t) == rhs.truncate(t)


@given(series(), series())
def test_mul_commutes(a, b):
    assert a * b == b * a


@given(units())
def test_inverse(a):
    inv = series_invert(a)
    prod = a * inv
    assert prod.agrees_with(FracQSeries.constant(1), prod.truncation_order)
    assert prod.truncation_order >= 0


@given(series())
def test_json_round_trip(a):
    assert FracQSeries.from_json(a.to_json()) == a


@given(units(), st.integers(1, 4))
def test_power_matches_repeated_product(a, k):
    want = a
    for _ in range(k - 1):
        want = want * a
    assert series_pow(a, k) == want
