"""Polynomials and rational functions in the recurrence index."""

import random
from fractions import Fraction

import pytest

from heunlab import (InvalidParams, PoleAtIndex, PolynomialInN, RationalFnInN,
                     monic_quadratic, nonneg_integer_roots, poly_from)


def test_quadratic_evaluation():
    p = poly_from(2, 3, 1)  # n^2 + 3n + 2, lowest power first
    assert p(1) == 6
    assert p(Fraction(1, 2)) == Fraction(15, 4)


def test_zero_polynomial():
    z = PolynomialInN(())
    assert z(7) == 0
    assert z.degree == -1 and z.is_zero
    with pytest.raises(InvalidParams):
        _ = z.leading


def test_monomial():
    p = poly_from(0, 0, 0, 1)  # n^3
    assert p(2) == 8
    assert p.degree == 3


def test_arithmetic_matches_pointwise(rng):
    for _ in range(20):
        a = poly_from(*[Fraction(rng.randrange(-5, 6)) for _ in range(rng.randrange(1, 5))])
        b = poly_from(*[Fraction(rng.randrange(-5, 6)) for _ in range(rng.randrange(1, 5))])
        n = Fraction(rng.randrange(-10, 11), rng.randrange(1, 4))
        assert (a + b)(n) == a(n) + b(n)
        assert (a - b)(n) == a(n) - b(n)
        assert (a * b)(n) == a(n) * b(n)
        assert a.scale(Fraction(3, 2))(n) == Fraction(3, 2) * a(n)
        assert a.shift(2)(n) == a(n + 2)


def test_trailing_zero_coefficients_are_trimmed():
    p = PolynomialInN((Fraction(1), Fraction(2), Fraction(0), Fraction(0)))
    assert p.degree == 1
    assert p == poly_from(1, 2)


def test_nonneg_integer_roots_exact():
    # (n + 1)(n - 3)(n - 7)(n + 2) has nonnegative integer roots {3, 7}
    q = poly_from(1, 1) * poly_from(-3, 1) * poly_from(-7, 1) * poly_from(2, 1)
    assert nonneg_integer_roots(q) == frozenset({3, 7})
    assert nonneg_integer_roots(poly_from(1)) == frozenset()


def test_nonneg_integer_roots_strips_origin_factor():
    # n^2 (n - 4): the origin root comes from the monomial factor
    p = poly_from(0, 0, -4, 1)
    assert nonneg_integer_roots(p) == frozenset({0, 4})


def test_nonneg_integer_roots_with_huge_coefficients():
    # coefficients past float range force the exact rescale before localization
    scale = Fraction(10) ** 400
    p = (poly_from(-2, 1) * poly_from(-5, 1)).scale(scale)
    assert nonneg_integer_roots(p) == frozenset({2, 5})


def test_near_integer_root_is_rejected_exactly():
    # (n - 2) shifted by a tiny rational: float localization would say 2
    p = poly_from(Fraction(-2) + Fraction(1, 10 ** 12), 1)
    assert nonneg_integer_roots(p) == frozenset()


def test_rational_fn_pole_detection():
    fn = RationalFnInN(poly_from(Fraction(1)),
                       poly_from(Fraction(2), 1) * poly_from(Fraction(-2), 1))
    assert fn.pole_set == frozenset({2})
    with pytest.raises(PoleAtIndex):
        fn(2)
    assert fn(3) == Fraction(1, 5)


def test_rational_fn_identity():
    r = RationalFnInN(poly_from(1, 1), poly_from(1, 1))  # (n+1)/(n+1)
    for n in (0, 1, 5, Fraction(7, 2)):
        assert r(n) == 1


def test_rational_fn_shift_composition():
    fn = RationalFnInN(poly_from(1, 2), poly_from(3, 0, 1))
    n = Fraction(5, 3)
    assert fn.shift(4).shift(1)(n) == fn.shift(5)(n)
    assert fn.shift(0)(n) == fn(n)


def test_rational_fn_degrees_and_leading_ratio():
    fn = RationalFnInN(poly_from(1, 4, 6), poly_from(2, 3, 2))
    assert fn.degrees == (2, 2)
    assert fn.leading_ratio() == 3
    low = RationalFnInN(poly_from(1, 1), poly_from(2, 3, 2))
    assert low.leading_ratio() == 0
    with pytest.raises(InvalidParams):
        RationalFnInN(poly_from(0, 0, 1), poly_from(1, 1)).leading_ratio()


def test_rational_fn_rejects_zero_denominator():
    with pytest.raises(InvalidParams):
        RationalFnInN(poly_from(1), PolynomialInN(()))


def test_monic_quadratic():
    p = monic_quadratic(Fraction(3), Fraction(2))
    assert p(1) == 6 and p.coeffs == (Fraction(2), Fraction(3), 1)
