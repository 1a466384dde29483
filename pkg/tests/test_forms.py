from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from prime_borcherds.borcherds import lift_metadata
from prime_borcherds.characters import legendre_chi
from prime_borcherds.errors import ObstructionError, PreconditionError, TruncationError
from prime_borcherds.forms import (
    PrincipalPart,
    ScalarForm,
    construct_f1_p5,
    construct_fm,
    construct_fm_p5,
    dim_S2,
    dim_S2_plus,
    eisenstein_E2_level5,
    eisenstein_E_delta,
    eisenstein_G,
    eisenstein_H,
    eta_quotient,
    f5_product_seed,
    fm_principal_part,
    fricke_eta_quotient,
    hecke_Up,
    obstruction_check,
    plus_space_sign_check,
    reduce_to_principal_part,
    s_mult,
    split_plus_minus,
    up_wp_identity_f1,
)
from prime_borcherds.series import FracQSeries

H = Fraction(1, 2)
TABLE = {
    1: {-1: 1, 0: 5, 1: 11, 4: -54, 5: 55, 6: 44, 9: -395, 10: 340, 11: 296, 14: -1836},
    4: {-4: 1, 0: 15, 1: -216, 4: 4959, 5: 22040, 6: -90984, 9: 409944, 10: 1388520},
    5: {-5: H, 0: 15, 1: 275, 4: 27550, 5: 43893, 6: 255300, 9: 4173825},
    6: {-6: 1, 0: 10, 1: 264, 4: -136476, 5: 306360, 6: 616220, 9: -35408776},
    9: {-9: 1, 0: 35, 1: -3555, 4: 922374, 5: 7512885, 6: -53113164, 9: 953960075},
    10: {-10: H, 0: 10, 1: 3400, 4: 3471300, 5: 9614200, 6: 91620925, 9: 5391558200},
}
ADMISSIBLE = [m for m in range(1, 31) if legendre_chi(m, 5) != -1]


@pytest.mark.parametrize("m", sorted(TABLE))
def test_fm_table(m):
    f = construct_fm_p5(m)
    for n, c in TABLE[m].items():
        assert f[n] == c, (m, n)
    assert f.truncation_order == m + 25


def test_f1_exact_prefix():
    f = construct_fm_p5(1, prec=15)
    assert f.series == FracQSeries({n: Fraction(c) for n, c in TABLE[1].items()}, 1, 15)


def test_eisenstein_B_values():
    E = eisenstein_E_delta(2, 1, 5, 7)
    assert [E[n] for n in range(7)] == [1, -10, 0, 0, -30, -30, -20]
    assert E.sign == 1 and E.holomorphy == "holomorphic"


def test_eisenstein_minus_space_support():
    E = eisenstein_E_delta(2, -1, 5, 30)
    assert plus_space_sign_check(E) == -1
    assert E[0] == 1


def test_eisenstein_needs_nonzero_l_value():
    with pytest.raises(PreconditionError):
        eisenstein_G(3, 5, 10)


def test_eta_quotients_are_eisenstein():
    G = eisenstein_G(2, 5, 40).series
    Hs = eisenstein_H(2, 5, 40).series
    assert eta_quotient({1: 5, 5: -1}, 40) == G
    assert eta_quotient({5: 5, 1: -1}, 40) == Hs
    assert [G[n] for n in range(5)] == [1, -5, 5, 10, -15]


def test_f1_is_e2_over_h2():
    e2 = eisenstein_E2_level5(30)
    h2 = eisenstein_H(2, 5, 30).series
    f1 = construct_f1_p5(28)
    assert (e2 / h2).agrees_with(f1.series, 28)


def test_f5_seed_principal_part():
    seed = f5_product_seed(5).series
    assert seed.principal_part() == {-5: H, -4: -5, -1: -15}
    f5 = construct_fm_p5(5, 10).series
    f4 = construct_fm_p5(4, 10).series
    f1 = construct_fm_p5(1, 10).series
    assert f5.truncate(5) == seed + f4.truncate(5) * 5 + f1.truncate(5) * 15


@pytest.mark.parametrize("m", ADMISSIBLE[:14])
def test_fm_plus_space_and_normalization(m):
    f = construct_fm_p5(m)
    assert plus_space_sign_check(f) == 1
    assert f.series.principal_part() == {-m: Fraction(1, s_mult(m, 5))}


@pytest.mark.parametrize("m", ADMISSIBLE[:14])
def test_fm_integral_after_scaling(m):
    f = construct_fm_p5(m)
    assert all((c * s_mult(m, 5)).denominator == 1 for _, c in f.series.items())


@pytest.mark.parametrize("m", [m for m in ADMISSIBLE if m <= 20])
def test_constant_term_is_eisenstein(m):
    E = eisenstein_E_delta(2, 1, 5, 21)
    f = construct_fm_p5(m)
    assert f[0] == -E[m] / 2
    assert lift_metadata(f)["weight"] == obstruction_check(f.principal_part()).a0


def test_excluded_m():
    with pytest.raises(PreconditionError, match="chi_5"):
        construct_fm_p5(2)
    with pytest.raises(PreconditionError):
        construct_fm_p5(0)


def test_dimensions():
    assert {p: dim_S2(p) for p in (5, 13, 17, 29, 53)} == {5: 0, 13: 0, 17: 0, 29: 2, 53: 4}
    assert [dim_S2_plus(p) for p in (5, 29, 53)] == [0, 1, 2]
    with pytest.raises(PreconditionError):
        dim_S2(7)


def test_obstruction_examples():
    r = obstruction_check(PrincipalPart(5, 1, {-1: 1}))
    assert r.ok and r.a0 == 5
    r = obstruction_check(PrincipalPart(5, 1, {-10: H}))
    assert r.ok and r.a0 == 10


def test_obstruction_pairing_with_synthetic_cusp_form():
    g = ScalarForm(29, 2, FracQSeries({1: 3, 4: 1, 5: 7}, 1, 10), 1, "cusp")
    r = obstruction_check(PrincipalPart(29, 1, {-1: 1, -4: 2}), [g])
    assert not r.ok and r.pairings == (Fraction(3 + 2 * 1),)
    r = obstruction_check(PrincipalPart(29, 1, {-1: 1, -4: Fraction(-3)}), [g])
    assert r.ok


def test_obstruction_rejects_bad_basis():
    g = ScalarForm(29, 2, FracQSeries({0: 1, 1: 3}, 1, 10), 1, "holomorphic")
    with pytest.raises(PreconditionError):
        obstruction_check(PrincipalPart(29, 1, {-1: 1}), [g])


def test_reduction_requires_basis_when_obstructed():
    with pytest.raises(ObstructionError):
        reduce_to_principal_part([], PrincipalPart(29, 1, {-1: 1}), 10)


def test_reduction_unreachable_pole():
    f1 = construct_fm_p5(1, 40)
    with pytest.raises(PreconditionError, match="not reachable"):
        reduce_to_principal_part([f1], PrincipalPart(5, 1, {-4: 1}), 10)


def test_reduction_checks_generator_precision():
    f1 = construct_fm_p5(1, 12)
    with pytest.raises(TruncationError):
        reduce_to_principal_part([f1], PrincipalPart(5, 1, {-6: 1}), 10)


def test_seeded_reduction_other_prime():
    seed = ScalarForm(13, 0, FracQSeries({-1: 2, 0: 7, 14: 5}, 1, 40), 1)
    f = construct_fm(13, 1, 10, seeds=[seed])
    assert f[-1] == 1 and f[0] == Fraction(7, 2)
    # seed * j(13 tau) also has a q^-13 term that no seed can clear
    with pytest.raises(PreconditionError, match="not reachable"):
        construct_fm(13, 14, 10, seeds=[seed])
    seed13 = ScalarForm(13, 0, FracQSeries({-13: 1, 0: 3}, 1, 40), 1)
    f14 = construct_fm(13, 14, 10, seeds=[seed, seed13])
    assert f14.series.principal_part() == {-14: 1}
    with pytest.raises(PreconditionError):
        construct_fm(13, 2, 10, seeds=[seed])
    with pytest.raises(PreconditionError):
        construct_fm(13, 1)


def test_scalar_form_sign_validation():
    with pytest.raises(PreconditionError):
        ScalarForm(5, 0, FracQSeries({2: 1}, 1, 5), 1)
    with pytest.raises(PreconditionError):
        ScalarForm(5, 2, FracQSeries({0: 1}, 1, 5), None, "cusp")
    with pytest.raises(PreconditionError):
        PrincipalPart(5, 1, {-2: 1})


def test_scalar_form_json_round_trip():
    f = construct_fm_p5(5, 12)
    g = ScalarForm.from_json(f.to_json())
    assert g == f
    pp = f.principal_part()
    assert PrincipalPart.from_json(pp.to_json()) == pp


def test_hecke_up():
    f1 = construct_fm_p5(1, 30)
    u = hecke_Up(f1)
    assert u.truncation_order == 6
    assert [u[n] for n in range(4)] == [25, 275, 1700, 7475]
    odd = ScalarForm(7, 1, FracQSeries({0: 1}, 1, 5))
    with pytest.raises(PreconditionError):
        hecke_Up(odd)


def test_fricke_scalars():
    c, swapped = fricke_eta_quotient(5, 5, -1)
    assert swapped == (-1, 5) and c.coeff == -1 and c.half_power == 3
    c, _ = fricke_eta_quotient(5, -1, 5)
    assert c.coeff == -1 and c.half_power == -3


def test_up_wp_identity():
    lhs, rhs = up_wp_identity_f1(10)
    assert lhs == rhs and lhs.truncation_order == 10


def test_split_plus_minus():
    s = FracQSeries({0: 1, 1: 2, 2: 3, 3: 4, 4: 5}, 1, 5)
    plus, minus = split_plus_minus(ScalarForm(5, 0, s))
    assert plus.series + minus.series == s
    assert plus_space_sign_check(plus) == 1 and plus_space_sign_check(minus) == -1


@given(st.sampled_from(ADMISSIBLE[1:10]), st.fractions(-5, 5, max_denominator=4))
def test_reduction_is_linear(m, c):
    target = PrincipalPart(5, 1, {-m: c / s_mult(m, 5), -1: 1})
    gens = [construct_fm_p5(k, 40) for k in (1, 4, 5)]
    got = reduce_to_principal_part(gens, target, 10)
    want = construct_fm_p5(m, 10).series.scale(c) + construct_fm_p5(1, 10).series
    assert got.series == want
