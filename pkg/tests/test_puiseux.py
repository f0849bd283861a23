import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lipgerm.puiseux import (
    BothZero,
    PuiseuxSeries,
    compare_eventual,
    fit_slope,
    format_series,
    norm2_leading,
    parse_series,
)

EXPONENTS = [Fraction(n, d) for d in (1, 2, 3) for n in range(0, 13) if Fraction(n, d) <= 6]
COEFFS = [Fraction(n, d) for n in range(-6, 7) for d in (1, 2, 3)]


@st.composite
def series(draw, max_terms=4):
    k = draw(st.integers(0, max_terms))
    terms = [
        (draw(st.sampled_from(EXPONENTS)), draw(st.sampled_from(COEFFS)))
        for _ in range(k)
    ]
    return PuiseuxSeries(terms, Fraction(8))


def eq_mod_truncation(a: PuiseuxSeries, b: PuiseuxSeries) -> bool:
    K = min(a.truncation, b.truncation)
    return a.truncate_to(K) == b.truncate_to(K)


@settings(max_examples=200, deadline=None)
@given(series(), series())
def test_addition_commutes(a, b):
    assert a + b == b + a


@settings(max_examples=200, deadline=None)
@given(series(), series(), series())
def test_addition_associates(a, b, c):
    assert (a + b) + c == a + (b + c)


@settings(max_examples=200, deadline=None)
@given(series(), series())
def test_multiplication_commutes(a, b):
    assert eq_mod_truncation(a * b, b * a)


@settings(max_examples=150, deadline=None)
@given(series(), series(), series())
def test_distributivity(a, b, c):
    assert eq_mod_truncation(a * (b + c), a * b + a * c)


@settings(max_examples=200, deadline=None)
@given(series())
def test_additive_inverse(a):
    assert (a - a).is_zero()
    assert a + PuiseuxSeries.zero(a.truncation) == a


@settings(max_examples=100, deadline=None)
@given(series())
def test_multiplicative_identity(a):
    one = PuiseuxSeries.constant(1, a.truncation)
    assert eq_mod_truncation(a * one, a)


def test_inverse_is_reciprocal():
    rng = random.Random(0)
    one = PuiseuxSeries.constant(1)
    for _ in range(50):
        terms = [(Fraction(0), Fraction(rng.randint(1, 5)))]
        for _ in range(rng.randint(0, 3)):
            terms.append(
                (Fraction(rng.randint(1, 8), rng.choice((1, 2))),
                 Fraction(rng.randint(-4, 4)))
            )
        a = PuiseuxSeries(terms)
        prod = a * a.inverse()
        K = min(prod.truncation, one.truncation)
        assert prod.truncate_to(K) == one.truncate_to(K)


def test_eval_matches_terms():
    a = PuiseuxSeries([(Fraction(1), Fraction(2)), (Fraction(3, 2), Fraction(-1))])
    t = 0.25
    assert a.eval(t) == pytest.approx(2 * t - t ** 1.5, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(series())
def test_parse_format_roundtrip(a):
    assert parse_series(format_series(a), a.truncation) == a


def test_parse_fractional_exponents():
    a = parse_series("3/2*t^{5/2} + -1*t")
    assert a.coefficient_at(Fraction(5, 2)) == Fraction(3, 2)
    assert a.coefficient_at(1) == -1


def test_compare_eventual_signs():
    rng = random.Random(1)
    for _ in range(200):
        k = rng.randint(0, 3)
        a = PuiseuxSeries(
            [(Fraction(rng.randint(0, 6), rng.choice((1, 2))),
              Fraction(rng.randint(-4, 4))) for _ in range(k)]
        )
        b = PuiseuxSeries(
            [(Fraction(rng.randint(0, 6), rng.choice((1, 2))),
              Fraction(rng.randint(-4, 4))) for _ in range(rng.randint(0, 3))]
        )
        v = compare_eventual(a, b)
        if v in ("Less", "Greater"):
            # evaluate the exact difference series to dodge float
            # cancellation between terms of very different magnitude
            diff = (a - b).eval(2.0 ** -24)
            assert (diff < 0) == (v == "Less")
        elif v == "Equal":
            assert (a - b).is_zero()


def test_compare_inconclusive_on_truncation_mismatch():
    a = PuiseuxSeries([(Fraction(1), Fraction(1))], Fraction(4))
    b = PuiseuxSeries([(Fraction(1), Fraction(1))], Fraction(9))
    assert a.compare_eventual(b) == "Inconclusive"


def test_norm2_leading_square_case():
    dx = PuiseuxSeries([(Fraction(1), Fraction(3))])
    dy = PuiseuxSeries([(Fraction(1), Fraction(4))])
    lt = norm2_leading(dx, dy)
    # |(3t, 4t)|^2 = 25 t^2: even power of a perfect square
    assert lt.exponent == 2
    assert lt.coefficient == 25


def test_norm2_leading_sqrt_flag():
    dx = PuiseuxSeries([(Fraction(1), Fraction(1))])
    dy = PuiseuxSeries([(Fraction(1), Fraction(1))])
    lt = norm2_leading(dx, dy)
    assert lt.exponent == 2
    assert lt.coefficient == 2
    assert lt.needs_sqrt


def test_norm2_leading_both_zero():
    z = PuiseuxSeries.zero()
    with pytest.raises(BothZero):
        norm2_leading(z, z)


def test_fit_slope_recovers_exponent():
    for e in (1.0, 1.5, 2.0, 3.25):
        ts = [2.0 ** -k for k in range(4, 14)]
        vals = [7.3 * t ** e for t in ts]
        assert fit_slope(ts, vals) == pytest.approx(e, abs=1e-9)


def test_truncation_drops_high_terms():
    a = PuiseuxSeries([(Fraction(1), 1), (Fraction(20), 5)], Fraction(12))
    assert a.coefficient_at(20) == 0
    assert a.truncation == 12
