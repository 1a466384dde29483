from fractions import Fraction

import pytest

from prime_borcherds.borcherds import (
    HilbertExpansion,
    R_set,
    default_grading_direction,
    integrality_normalize,
    lift_metadata,
    standard_basepoint,
    product_expansion,
    walls_for,
    weyl_chamber_of,
    weyl_vector,
)
from prime_borcherds.characters import legendre_chi
from prime_borcherds.errors import PreconditionError, TruncationError
from prime_borcherds.forms import ScalarForm, construct_fm_p5
from prime_borcherds.oracles import brute_force_product, r_set_scan, weyl_min_formula
from prime_borcherds.quadfield import CodiffElem, QFieldElem, fundamental_unit, is_ideal_norm, pairing
from prime_borcherds.series import FracQSeries

E0 = fundamental_unit(5)
S5 = QFieldElem.sqrt_p(5)
BASE = standard_basepoint(5)


def f(m, prec=60):
    return construct_fm_p5(m, prec)


def oracle_terms(e, form, W):
    o = brute_force_product(form, W.interior_point, e.grading_direction, e.grading_bound)
    return {k: Fraction(v) for k, v in o.items() if k}, o.get(QFieldElem(5, 0, 0))


def test_walls_of_f1_are_unit_multiples():
    walls = walls_for(f(1), BASE, reach=2)
    assert walls
    for w in walls:
        ratio = w * S5
        # every wall is eps0^(2k)/sqrt(5)
        k = 0
        x = ratio
        while x > 1:
            x, k = x / (E0 * E0), k + 1
        while x < 1:
            x, k = x * E0 * E0, k - 1
        assert x == 1


def test_no_walls_cases():
    g = ScalarForm(5, 0, FracQSeries({-2: 1, 0: 1}, 1, 5))
    assert walls_for(g) == []
    z = ScalarForm(5, 0, FracQSeries({0: 3}, 1, 5), 1)
    assert walls_for(z) == []


def test_chamber_of_f1():
    W = weyl_chamber_of(f(1), BASE)
    assert W.walls == [CodiffElem.of(1 / S5), CodiffElem.of(E0 * E0 / S5)]
    assert W.signs() == (-1, 1)
    assert not W.is_whole_space


def test_basepoint_on_wall():
    with pytest.raises(PreconditionError, match="wall"):
        weyl_chamber_of(f(1), (1, 1))
    with pytest.raises(PreconditionError):
        weyl_chamber_of(f(1), (-1, 1))


def test_r_set_and_weyl_vector_f1():
    W = weyl_chamber_of(f(1), BASE)
    assert R_set(W, f(1), -1) == [CodiffElem.of(1 / S5)]
    assert weyl_vector(f(1), W).rho == E0 / S5


def test_r_set_f4_against_scan():
    W = weyl_chamber_of(f(4), BASE)
    got = R_set(W, f(4), -4)
    assert got == r_set_scan(5, -4, *BASE)
    assert weyl_vector(f(4), W).rho == 2 * E0 / S5


@pytest.mark.parametrize("point", [
    BASE,
    (QFieldElem(5, 1, 0), QFieldElem(5, 2, 0)),
    (QFieldElem(5, 1, 0), QFieldElem(5, 5, 0)),
    (QFieldElem(5, 3, 0), QFieldElem(5, 4, 0)),
    (QFieldElem(5, 1, 0), E0 ** 3),
])
def test_weyl_vector_constant_on_chamber(point):
    W = weyl_chamber_of(f(1), point)
    assert weyl_chamber_of(f(1), BASE).contains(point)
    assert weyl_vector(f(1), W).rho == E0 / S5


def test_weyl_vector_linear():
    W = weyl_chamber_of(f(1), BASE)
    g = f(1).with_series(f(1).series.scale(2))
    assert weyl_vector(g, W).rho == 2 * weyl_vector(f(1), W).rho


def test_whole_space_weyl_vector():
    W = weyl_chamber_of(f(6), (1, 1))
    assert W.is_whole_space
    assert not weyl_vector(f(6), W).rho
    assert R_set(W, f(6), -6) == []


@pytest.mark.parametrize("m,point", [
    (1, (1, 2)), (1, (1, 7)), (4, (1, 3)), (5, (1, 3)), (9, (2, 3)), (11, (1, 3)),
    (16, (3, 5)), (20, (1, 9)),
])
def test_weyl_vector_min_formula(m, point):
    form = f(m)
    W = weyl_chamber_of(form, point)
    rho = weyl_vector(form, W).rho
    y1, y2 = (float(y) for y in W.interior_point)
    lhs = float(rho) * y1 + float(rho.conj()) * y2
    assert abs(lhs - weyl_min_formula(form, y1, y2)) < 1e-8
    tr = E0.trace()
    assert (rho * tr).in_inverse_different()


def test_multi_pole_weyl_vector():
    form = f(1).with_series(f(1).series + f(4).series.scale(3))
    W = weyl_chamber_of(form, (1, 3))
    rho = weyl_vector(form, W).rho
    y1, y2 = 1.0, 3.0
    assert abs(float(rho) * y1 + float(rho.conj()) * y2 - weyl_min_formula(form, y1, y2)) < 1e-8


@pytest.mark.parametrize("m", [m for m in range(1, 31) if legendre_chi(m, 5) != -1])
def test_compactness_dichotomy(m):
    form = construct_fm_p5(m, m + 2)
    assert (walls_for(form) == []) == (not is_ideal_norm(m, 5))


def test_lift_metadata():
    assert lift_metadata(f(1)) == {"weight": 5, "divisor": [(1, 1)]}
    assert lift_metadata(f(10)) == {"weight": 10, "divisor": [(10, 1)]}
    assert lift_metadata(f(9)) == {"weight": 35, "divisor": [(9, 1)]}


def test_psi1_expansion():
    W = weyl_chamber_of(f(1), BASE)
    e = product_expansion(f(1), W, grading_bound=6)
    assert e.weyl.rho == E0 / S5
    assert e.grading_direction == QFieldElem(5, Fraction(5, 2), Fraction(-1, 2))
    terms, lead = oracle_terms(e, f(1), W)
    assert e.terms == terms and lead == 1
    assert e.coefficient_gcd() == 1
    # first factor comes from the wall vector -1/sqrt(5) with exponent a(-1) = 1
    assert e.coefficient(-1 / S5) == -1
    y1, y2 = BASE
    for nu in e.terms:
        assert 0 < pairing(nu, e.grading_direction) <= 6


@pytest.mark.parametrize("m,point,bound", [
    (1, None, 8), (4, None, 5), (5, (1, 3), 4), (9, (1, 3), 4), (6, (1, 1), 5),
    (10, (1, 1), 4), (14, (2, 5), 3),
])
def test_expansion_matches_oracle(m, point, bound):
    form = f(m, 90)
    W = weyl_chamber_of(form, point or BASE)
    e = product_expansion(form, W, grading_bound=bound)
    terms, lead = oracle_terms(e, form, W)
    assert e.terms == terms and lead == e.leading


def test_compact_case():
    assert not is_ideal_norm(6, 5)
    W = weyl_chamber_of(f(6), (1, 1))
    e = product_expansion(f(6), W, grading_bound=5)
    assert not e.weyl.rho and e.grading_direction == 1
    assert all(nu.is_totally_positive() for nu in e.terms)


def test_explicit_direction():
    W = weyl_chamber_of(f(1), BASE)
    d = QFieldElem(5, 5, -1)  # (d, d') = (2.76, 7.24): ratio 2.6 is inside (1, eps0^4)
    e = product_expansion(f(1), W, d, 5)
    terms, lead = oracle_terms(e, f(1), W)
    assert e.terms == terms
    with pytest.raises(PreconditionError, match="inside"):
        product_expansion(f(1), W, QFieldElem(5, 1, 0), 5)


def test_default_direction_search():
    W = weyl_chamber_of(f(1), (QFieldElem(5, 1, 0), QFieldElem(5, 2, 0)))
    d = default_grading_direction(W)
    assert d.is_integral() and W.contains_direction(d)


def test_expansion_preconditions():
    W = weyl_chamber_of(f(1), BASE)
    with pytest.raises(TruncationError):
        product_expansion(construct_fm_p5(1, 5), W, grading_bound=10)
    half = f(1).with_series(f(1).series.scale(Fraction(1, 2)))
    with pytest.raises(PreconditionError, match="not an integer"):
        product_expansion(half, W, grading_bound=4)
    minus = ScalarForm(5, 0, FracQSeries({2: 1}, 1, 5), -1)
    with pytest.raises(PreconditionError):
        product_expansion(minus, W, grading_bound=2)


def test_zero_input_gives_one():
    z = ScalarForm(5, 0, FracQSeries({}, 1, 40), 1)
    W = weyl_chamber_of(z, (1, 1))
    e = product_expansion(z, W, grading_bound=4)
    assert e.terms == {} and e.leading == 1
    assert integrality_normalize(e) == (1, e)
    assert e.coefficient_gcd() == 1


def test_integrality_normalize():
    W = weyl_chamber_of(f(1), BASE)
    e = product_expansion(f(1), W, grading_bound=10)
    c, n = integrality_normalize(e)
    assert c == 1 and n.coefficient_gcd() == 1
    c, n = integrality_normalize(e.scale(Fraction(1, 3)))
    assert c == 3 and "window-only" in n.caveats
    assert n.terms == e.terms


def test_json_round_trip():
    W = weyl_chamber_of(f(1), BASE)
    e = product_expansion(f(1), W, grading_bound=6)
    data = e.to_json()
    assert HilbertExpansion.from_json(data) == e
    keys = [(pairing(CodiffElem.from_json(5, t["nu"]), e.grading_direction),
             Fraction(t["nu"]["u"]), Fraction(t["nu"]["v"])) for t in data["terms"]]
    assert keys == sorted(keys)


def test_thread_count_does_not_change_result(monkeypatch):
    W = weyl_chamber_of(f(1), BASE)
    monkeypatch.setenv("PRIME_BORCHERDS_THREADS", "1")
    a = product_expansion(f(1), W, grading_bound=8)
    monkeypatch.setenv("PRIME_BORCHERDS_THREADS", "4")
    b = product_expansion(f(1), W, grading_bound=8)
    assert a.to_json() == b.to_json()
