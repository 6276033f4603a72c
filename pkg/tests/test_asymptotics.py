from __future__ import annotations

import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orlicz_domain.asymptotics import (
    Chart, ChartMismatch, Order, PLLTerm, as_fraction, diverges, format_term, parse_term, pll_compare,
    pll_limit_ratio, pll_mul, pll_power, pll_reciprocal_substitute, pll_substitute_power, pll_sup_tail, vanishes,
)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=12)
coeffs = st.floats(min_value=1e-3, max_value=1e3)


@st.composite
def terms(draw, chart=Chart.INF):
    return PLLTerm(draw(coeffs), draw(rationals), draw(rationals), draw(rationals), chart)


def test_as_fraction_reads_strings_and_floats():
    assert as_fraction("3/4") == F(3, 4)
    assert as_fraction(0.5) == F(1, 2)
    assert as_fraction(2) == 2


def test_rejects_nonpositive_coefficient():
    with pytest.raises(ValueError):
        PLLTerm(0.0, 1)


def test_mul_adds_exponents():
    x = PLLTerm.at_inf(2, 1, F(1, 2), coeff=3.0)
    y = PLLTerm.at_inf(F(1, 3), -1, 1, coeff=0.5)
    z = pll_mul(x, y)
    assert z.exponents == (F(7, 3), 0, F(3, 2))
    assert z.coeff == pytest.approx(1.5)


def test_mul_across_charts_fails():
    with pytest.raises(ChartMismatch):
        pll_mul(PLLTerm.at_inf(1), PLLTerm.at_zero(1))


def test_power_scales_exponents_and_coefficient():
    x = pll_power(PLLTerm.at_inf(2, 1, coeff=4.0), F(1, 2))
    assert x.exponents == (1, F(1, 2), 0)
    assert x.coeff == pytest.approx(2.0)


def test_compare_at_infinity():
    assert pll_compare(PLLTerm.at_inf(2, 1), PLLTerm.at_inf(2)) is Order.LARGER
    assert pll_compare(PLLTerm.at_inf(2, 0, -1), PLLTerm.at_inf(2)) is Order.SMALLER
    assert pll_compare(PLLTerm.at_inf(2, coeff=7.0), PLLTerm.at_inf(2)) is Order.EQUIVALENT


def test_compare_at_zero_reverses_powers():
    # near zero t^{1/3} dominates t^{1/2}
    assert pll_compare(PLLTerm.at_zero(F(1, 2)), PLLTerm.at_zero(F(1, 3))) is Order.SMALLER
    assert pll_compare(PLLTerm.at_zero(0, 1), PLLTerm.at_zero(0)) is Order.LARGER


def test_divergence_and_vanishing():
    assert diverges(PLLTerm.at_zero(F(-1, 6)))
    assert not diverges(PLLTerm.at_zero(0, -1, 5))
    assert vanishes(PLLTerm.at_zero(0, -1, 5))
    assert diverges(PLLTerm.at_inf(0, 0, 1))


@given(terms())
def test_compare_matches_numeric_ratio_trend(x):
    y = PLLTerm.at_inf(x.pow, x.logexp, x.loglogexp + 1)
    assert pll_compare(x, y) is Order.SMALLER
    assert pll_compare(y, x) is Order.LARGER


def test_substitute_power_is_asymptotic():
    x = PLLTerm.at_inf(1, 2, 1)
    s = F(3, 2)
    sub = pll_substitute_power(x, s)
    u = np.array([1e2, 1e6])  # log t
    log_ratio = x.log_eval(float(s) * u) - sub.log_eval(u)
    assert abs(log_ratio[-1]) < abs(log_ratio[0])
    assert abs(log_ratio[-1]) < 0.05  # loglog(t^s) / loglog(t) = 1 + log s / loglog t


def test_substitute_power_log_coefficient_exact():
    # log(t^2) = 2 log t
    sub = pll_substitute_power(PLLTerm.at_inf(0, 1), 2)
    assert sub.coeff == pytest.approx(2.0)


def test_reciprocal_substitute():
    x = PLLTerm.at_inf(2, 1)
    r = pll_reciprocal_substitute(x, 1)
    assert r.chart is Chart.ZERO and r.exponents == (-2, 1, 0)
    t = 1e-100
    assert x.eval(1 / t) / r.eval(t) == pytest.approx(1, rel=1e-2)
    with pytest.raises(ChartMismatch):
        pll_reciprocal_substitute(PLLTerm.at_zero(1), 1)


@given(terms(), st.floats(min_value=1.5, max_value=20))
def test_limit_ratio_is_power_of_K(x, K):
    assert pll_limit_ratio(x, K) == pytest.approx(K ** float(x.pow))


def test_limit_ratio_numeric():
    x = PLLTerm.at_inf(F(3, 10), 2)
    t = 1e150
    assert x.eval(2 * t) / x.eval(t) == pytest.approx(pll_limit_ratio(x, 2), rel=1e-2)


def test_sup_tail_divergent_is_identity():
    x = PLLTerm.at_zero(F(-1, 3), 1)
    assert pll_sup_tail(x) == x


def test_sup_tail_bounded_gives_peak():
    # sup_{0<s<1} s^{1/2} = 1
    assert pll_sup_tail(PLLTerm.at_zero(F(1, 2))).coeff == pytest.approx(1.0, rel=1e-6)
    # s log(2/s) peaks at s = 2/e with value 2/e
    assert pll_sup_tail(PLLTerm.at_zero(1, 1)).coeff == pytest.approx(2 / math.e, rel=1e-4)


def test_eval_domain():
    assert math.isnan(PLLTerm.at_zero(1).eval(2.0))
    assert PLLTerm.at_zero(1).eval(1.0) == 1.0
    assert math.isnan(PLLTerm.at_inf(1, 0, 1).eval(2.0))


@given(terms(Chart.ZERO))
def test_format_parse_round_trip(x):
    y = parse_term(format_term(x))
    assert y == x


def test_parse_partial_and_bad():
    x = parse_term("2 * t^{3/2} @ inf")
    assert x.exponents == (F(3, 2), 0, 0) and x.coeff == 2
    with pytest.raises(ValueError):
        parse_term("2 * t^{1}")
