"""
Test the multivariate polynomials and their Hasse coefficients.
"""

import itertools

import numpy as np

from kakeya_lab import lab_config
from kakeya_lab.polynomials import (MultivariatePolynomial, NEG_INF,
                                    monomials, poly_eval, hasse_coefficient,
                                    poly_factor_out, zero_count,
                                    ZERO_COUNT_CAP, root_multiplicity)
from kakeya_lab.exceptions import (DimensionMismatch, ZeroPolynomial,
                                   EnumerationTooLarge, BadParameters)
from kakeya_lab.testing import raises, parametrize
from kakeya_lab.test.common import (F3, F4, F5, F7, F9, all_points,
                                    naive_eval)


def poly(field, n, text):
    return MultivariatePolynomial.from_string(field, n, text)


def random_poly(field, n, degree, rng, n_terms=6):
    terms = {}
    for _ in range(n_terms):
        exps = tuple(int(e) for e in rng.integers(0, degree + 1, size=n))
        terms[exps] = int(rng.integers(0, field.q))
    return MultivariatePolynomial(field, n, terms)


def test_monomials_graded_lex():
    assert monomials(2, 2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1),
                               (0, 2)]
    assert len(monomials(3, 4)) == 35
    assert monomials(0, 3) == [()]


def test_poly_eval_examples():
    assert poly_eval(poly(F3, 2, 'x1^2 + x2'), (1, 2)) == 0
    assert poly_eval(MultivariatePolynomial.zero(F3, 2), (2, 2)) == 0
    assert poly_eval(poly(F3, 2, 'x1*x2 + 1'), (2, 1)) == 0
    with raises(DimensionMismatch):
        poly_eval(poly(F3, 2, 'x1 + x2'), (1,))


@parametrize('field', [F3, F4, F5, F9], ids=repr)
def test_evaluate_matches_naive(field):
    rng = np.random.default_rng(0)
    P = random_poly(field, 2, field.q + 1, rng)
    values = P.evaluate_all()
    for index, point in enumerate(all_points(field, 2)):
        assert P.evaluate(point) == naive_eval(P, point)
        assert values[index] == naive_eval(P, point)


def test_degree_and_zero_polynomial():
    zero = MultivariatePolynomial.zero(F5, 3)
    assert zero.degree == NEG_INF
    assert zero.is_zero()
    assert not zero
    P = poly(F5, 3, 'x1^2*x3 + 4*x2 + 1')
    assert P.degree == 3
    assert P.degree_in(1) == 1
    assert (P - P).is_zero()


def test_arithmetic():
    x = MultivariatePolynomial.variable(F7, 2, 0)
    y = MultivariatePolynomial.variable(F7, 2, 1)
    P = (x + y) ** 2
    assert P == x * x + 2 * x * y + y * y
    assert (P - 1) + 1 == P
    assert P.scale(3) == 3 * P
    with raises(BadParameters):
        x ** -1
    with raises(DimensionMismatch):
        x + MultivariatePolynomial.variable(F7, 3, 0)


def test_hasse_coefficient_examples():
    # (x - 1)^2 = x^2 + x + 1 over F_3
    P = poly(F3, 1, 'x1^2 + x1 + 1')
    assert hasse_coefficient(P, (1,), (1,)) == 0
    assert hasse_coefficient(P, (1,), (2,)) == 1
    assert hasse_coefficient(P, (1,), (0,)) == 0
    frobenius = poly(F3, 1, 'x1^3')
    assert hasse_coefficient(frobenius, (0,), (1,)) == 0
    assert hasse_coefficient(frobenius, (0,), (3,)) == 1
    with raises(DimensionMismatch):
        hasse_coefficient(P, (1,), (1, 0))


def test_hasse_at_origin_is_the_coefficient():
    rng = np.random.default_rng(1)
    P = random_poly(F9, 3, 4, rng, n_terms=10)
    for e in monomials(3, 6):
        assert P.hasse_coefficient((0, 0, 0), e) == P.coefficient(e)


@parametrize('field', [F3, F4, F5], ids=repr)
def test_shift_resums_to_the_polynomial(field):
    rng = np.random.default_rng(2)
    P = random_poly(field, 2, 4, rng)
    for v in [(1, 2), (0, 1), (field.q - 1, field.q - 1)]:
        shifted = P.shift(v)
        for e, c in shifted.terms.items():
            assert P.hasse_coefficient(v, e) == c
        for x in all_points(field, 2):
            delta = tuple(field.sub(a, b) for a, b in zip(x, v))
            assert shifted.evaluate(delta) == P.evaluate(x)


def test_vanishing_order():
    # (x - 2)^3 (y - 1) over F_5
    x = MultivariatePolynomial.variable(F5, 2, 0)
    y = MultivariatePolynomial.variable(F5, 2, 1)
    P = (x - 2) ** 3 * (y - 1)
    assert P.vanishing_order((2, 1)) == 4
    assert P.vanishing_order((2, 0)) == 3
    assert P.vanishing_order((0, 0)) == 0
    assert P.vanishes_to_order((2, 1), 4)
    assert not P.vanishes_to_order((2, 1), 5)
    h = MultivariatePolynomial.variable(F5, 1, 0) ** 2
    assert root_multiplicity(h, 0) == 2
    with raises(ZeroPolynomial):
        root_multiplicity(MultivariatePolynomial.zero(F5, 1), 0)


def test_poly_factor_out():
    P = poly(F5, 2, 'x2^2*x1 + x2^2')
    j, Q = poly_factor_out(P, 1)
    assert j == 2
    assert Q == poly(F5, 2, 'x1 + 1')
    j, Q = poly_factor_out(poly(F5, 2, 'x1 + 1'), 1)
    assert j == 0 and Q == poly(F5, 2, 'x1 + 1')
    with raises(ZeroPolynomial):
        poly_factor_out(MultivariatePolynomial.zero(F5, 2), 0)


def test_factor_out_round_trip():
    rng = np.random.default_rng(3)
    x3 = MultivariatePolynomial.variable(F7, 3, 2)
    for _ in range(5):
        P = random_poly(F7, 3, 3, rng) * x3 ** int(rng.integers(0, 4))
        if P.is_zero():
            continue
        j, Q = poly_factor_out(P, 2)
        assert x3 ** j * Q == P
        assert poly_factor_out(Q, 2)[0] == 0


def test_zero_count_examples():
    assert zero_count(poly(F3, 2, 'x1^2 + x2')) == 3
    for field, n in [(F3, 3), (F4, 2), (F5, 2)]:
        x1 = MultivariatePolynomial.variable(field, n, 0)
        assert zero_count(x1) == field.q ** (n - 1)
    assert zero_count(MultivariatePolynomial.constant(F5, 2, 3)) == 0
    with raises(ZeroPolynomial):
        zero_count(MultivariatePolynomial.zero(F5, 2))
    # zero counting has its own cap of 10^8 points
    with lab_config(cap_enum=10):
        assert zero_count(MultivariatePolynomial.variable(F3, 3, 0)) == 9
        with raises(EnumerationTooLarge):
            MultivariatePolynomial.variable(F3, 3, 0).evaluate_all()
    assert 3 ** 17 > ZERO_COUNT_CAP
    with raises(EnumerationTooLarge, match='above the cap of 100000000'):
        zero_count(MultivariatePolynomial.variable(F3, 17, 0))


def test_zero_count_bound_on_random_polynomials():
    rng = np.random.default_rng(4)
    for field in [F3, F4, F5]:
        for _ in range(5):
            P = random_poly(field, 2, 3, rng)
            if P.is_zero():
                continue
            count = zero_count(P)
            if P.degree > 0:
                assert count <= P.degree * field.q
            brute = sum(naive_eval(P, x) == 0
                        for x in all_points(field, 2))
            assert count == brute


def test_compose():
    # P(x, y) = x * y composed with x -> t + 1, y -> t
    P = poly(F5, 2, 'x1*x2')
    t = MultivariatePolynomial.variable(F5, 1, 0)
    R = P.compose([t + 1, t])
    assert R == t * t + t
    with raises(DimensionMismatch):
        P.compose([t])


def test_text_form():
    P = poly(F3, 2, 'x2 + 2 + x1^2')
    assert str(P) == '1*x1^2 + 1*x2 + 2'
    assert poly(F3, 2, str(P)) == P
    assert str(MultivariatePolynomial.zero(F3, 2)) == '0'
    assert P.to_dict() == {'n_vars': 2, 'text': '1*x1^2 + 1*x2 + 2'}
    with raises(BadParameters, match='cannot parse'):
        poly(F3, 2, 'x1 ^ y')
    with raises(DimensionMismatch):
        poly(F3, 2, 'x3')
    with raises(BadParameters):
        poly(F3, 2, '')


def test_homogeneous_parts():
    P = poly(F5, 2, 'x1^2 + 3*x1*x2 + x2 + 1')
    assert P.leading_form() == poly(F5, 2, 'x1^2 + 3*x1*x2')
    assert P.leading_form().is_homogeneous()
    assert not P.is_homogeneous()
    assert P.homogeneous_part(0) == MultivariatePolynomial.constant(F5, 2, 1)


def test_terms_are_read_only():
    P = poly(F5, 2, 'x1')
    with raises(TypeError):
        P.terms[(0, 1)] = 1
    assert list(itertools.chain(P.terms)) == [(1, 0)]
