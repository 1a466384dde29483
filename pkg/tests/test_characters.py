import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from prime_borcherds.characters import (
    FourthRoot,
    bernoulli_numbers,
    discriminant_form,
    generalized_bernoulli,
    is_prime,
    l_value_1_minus_kappa,
    least_nonresidue,
    legendre_chi,
    milgram_check,
    milgram_signature,
    quadratic_gauss_sum,
    signature_mod8,
    signature_table,
)
from prime_borcherds.errors import PreconditionError

PRIMES = [p for p in range(3, 60) if is_prime(p)]

# L(1 - kappa, chi_p), frozen from an mpmath Hurwitz-zeta evaluation
L_VALUES = {(2, 5): Fraction(-2, 5), (2, 13): Fraction(-2), (4, 5): Fraction(2),
            (3, 7): Fraction(-16, 7), (2, 17): Fraction(-4), (2, 29): Fraction(-6),
            (4, 13): Fraction(58)}


@pytest.mark.parametrize("key", sorted(L_VALUES))
def test_l_values(key):
    assert l_value_1_minus_kappa(*key) == L_VALUES[key]


def test_parity_zero_l_value():
    # chi_5 is even, so B_{3, chi_5} = 0
    assert generalized_bernoulli(3, 5) == 0


def test_bernoulli_numbers():
    B = bernoulli_numbers(12)
    assert B[1] == Fraction(-1, 2) and B[2] == Fraction(1, 6)
    assert B[4] == Fraction(-1, 30) and B[12] == Fraction(-691, 2730)
    assert all(B[k] == 0 for k in range(3, 13, 2))


@given(st.sampled_from(PRIMES), st.integers(-500, 500))
def test_legendre_matches_squares(p, n):
    squares = {x * x % p for x in range(1, p)}
    want = 0 if n % p == 0 else (1 if n % p in squares else -1)
    assert legendre_chi(n, p) == want


@given(st.sampled_from(PRIMES), st.integers(-50, 50), st.integers(-50, 50))
def test_legendre_multiplicative(p, a, b):
    assert legendre_chi(a * b, p) == legendre_chi(a, p) * legendre_chi(b, p)


def test_legendre_rejects_composite():
    with pytest.raises(PreconditionError):
        legendre_chi(3, 9)


@pytest.mark.parametrize("p", PRIMES)
def test_gauss_sums(p):
    for alpha in range(1, p):
        g = quadratic_gauss_sum(alpha, p)
        assert g.agrees
        assert g.sign == legendre_chi(alpha, p)


def test_gauss_sum_closed_forms():
    assert quadratic_gauss_sum(1, 5).describe() == "sqrt(5)"
    assert quadratic_gauss_sum(2, 5).describe() == "-sqrt(5)"
    assert quadratic_gauss_sum(1, 7).describe() == "i*sqrt(7)"
    assert FourthRoot.for_prime(13) is FourthRoot.ONE


def test_signature_table_from_milgram():
    assert signature_table() == [(1, 1, 0), (3, 1, 2), (1, -1, 4), (3, -1, 6)]


@pytest.mark.parametrize("p", PRIMES)
@pytest.mark.parametrize("eps", [1, -1])
def test_milgram_agrees_with_table(p, eps):
    assert milgram_signature(p, eps) == signature_mod8(p, eps)
    assert milgram_check(discriminant_form(p, epsilon=eps))


def test_discriminant_form_defaults():
    assert discriminant_form(5, epsilon=1).alpha == 1
    assert discriminant_form(5, epsilon=-1).alpha == 2
    assert discriminant_form(7, epsilon=-1).alpha == least_nonresidue(7) == 3
    info = discriminant_form(5, alpha=-1)
    assert info.alpha == 4 and info.epsilon == 1 and info.r_mod8 == 0
    assert info.q(1) == Fraction(4, 5)
    with pytest.raises(PreconditionError):
        discriminant_form(5, epsilon=1, alpha=2)


def test_dual_form():
    info = discriminant_form(7, epsilon=1)
    dual = info.dual()
    assert dual.alpha == 6 and dual.epsilon == -1
    assert (info.r_mod8 + dual.r_mod8) % 8 == 0


def test_e_helper():
    from prime_borcherds.characters import e
    assert abs(e(Fraction(1, 4)) - 1j) < 1e-12
    assert abs(e(0.5) - cmath.exp(1j * math.pi)) < 1e-12
