"""Tests for the q-series engine and the discriminant-quotient oracle."""

import random
from fractions import Fraction

import pytest

from cuspidal_torsion.base_ring import Modulus
from cuspidal_torsion.cusps import CuspDivisor, characters, identity_character
from cuspidal_torsion.errors import DomainError, TruncationError
from cuspidal_torsion.eta import (
    EtaQuotient,
    check_character,
    cuspidal_group_oracle,
    default_truncation,
    eta_quotient_of_char,
    expand,
    ligozat_orders,
    ord_at_infinity,
)
from cuspidal_torsion.qseries import QSeries, delta_qexp, euler_product
from cuspidal_torsion.torsion import jacobian_torsion
from cuspidal_torsion.verify import eta_checks

N11 = Modulus.nf(11)


def _random_series(rng, length=12):
    coeffs = [rng.randint(-9, 9) for _ in range(length)]
    coeffs[0] = rng.choice([1, 2, -3])
    return QSeries.from_coefficients(coeffs, valuation=rng.randint(-2, 2))


def test_delta_coefficients():
    series = delta_qexp(5)
    assert series.coefficients() == [1, -24, 252, -1472, 4830]
    assert series.coefficient(2) == -24
    assert series.coefficient(0) == 0


def test_coefficient_beyond_truncation():
    with pytest.raises(TruncationError):
        delta_qexp(5).coefficient(6)


def test_zero_constant_term_rejected():
    with pytest.raises(TruncationError):
        QSeries.from_coefficients([0, 0, 0])


def test_leading_zeros_move_into_valuation():
    series = QSeries.from_coefficients([0, 1, Fraction(1, 2)])
    assert series.valuation == 1
    assert series.truncation == 3
    assert series.coefficient(2) == Fraction(1, 2)


def test_series_multiplication_is_associative():
    rng = random.Random(7)
    for _ in range(10):
        a, b, c = (_random_series(rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)


def test_dilation_commutes_with_multiplication():
    rng = random.Random(11)
    for m in (2, 3, 5):
        a, b = _random_series(rng), _random_series(rng)
        assert (a * b).dilate(m) == a.dilate(m) * b.dilate(m)


def test_inverse():
    rng = random.Random(3)
    a = _random_series(rng)
    assert a * a.inverse() == QSeries.one(a.precision)
    assert (a / a) == QSeries.one(a.precision)
    assert a**-2 == (a * a).inverse()


def test_euler_product_cache_truncates():
    long = euler_product(30)
    short = euler_product(10)
    assert short.coefficients() == long.coefficients()[:10]
    assert euler_product(30) == long


def test_eta_quotient_of_char_eleven():
    quotient = eta_quotient_of_char(N11, (-1,))
    assert quotient.as_dict() == {1: 1, 11: -1}
    assert quotient.leading_exponent == -10
    assert str(quotient) == "Delta(1z)^1 * Delta(11z)^-1"


def test_eta_quotient_rejects_non_divisor():
    with pytest.raises(DomainError):
        EtaQuotient(11, ((2, 1),))


def test_ligozat_eleven():
    divisor = ligozat_orders(N11, eta_quotient_of_char(N11, (-1,)))
    assert divisor == CuspDivisor(1, (10, -10))


def test_order_at_infinity_from_series():
    quotient = eta_quotient_of_char(N11, (-1,))
    assert ord_at_infinity(N11, quotient) == -10
    assert default_truncation(N11) == 88


def test_expand_needs_enough_terms():
    quotient = eta_quotient_of_char(N11, (-1,))
    with pytest.raises(TruncationError):
        expand(quotient, -10)
    series = expand(quotient, 0)
    assert series.valuation == -10
    assert series.coefficient(-10) == 1


@pytest.mark.parametrize("level", [(11,), (2, 7), (3, 5), (2, 3, 5)])
def test_check_character(level):
    modulus = Modulus.nf(*level)
    for e in characters(modulus.s):
        if e == identity_character(modulus.s):
            continue
        result = check_character(modulus, e)
        assert result.passed, (level, e)


def test_oracle_matches_closed_form():
    for level in [(11,), (37,), (2, 7), (5, 7), (2, 3, 7)]:
        modulus = Modulus.nf(*level)
        assert cuspidal_group_oracle(modulus) == jacobian_torsion(modulus)


def test_oracle_is_nf_only():
    with pytest.raises(DomainError):
        cuspidal_group_oracle(Modulus.ff(2, "t", "t+1"))
    with pytest.raises(DomainError):
        eta_quotient_of_char(Modulus.ff(2, "t"), (-1,))


def test_eta_sweep_small_levels():
    checks = list(eta_checks(nmax=30))
    assert checks
    assert all(check.passed for check in checks), [c.name for c in checks if not c.passed]


def test_polynomial_form_of_delta():
    series = delta_qexp(5)
    assert QSeries.from_polynomial(series.to_polynomial(), 6) == series
    with pytest.raises(TruncationError):
        QSeries.from_polynomial(series.to_polynomial(), 1)


def test_order_at_infinity_is_read_from_the_expansion(monkeypatch):
    from cuspidal_torsion import eta

    modulus = Modulus.nf(2, 7)
    quotient = eta_quotient_of_char(modulus, (-1, -1))
    assert ord_at_infinity(modulus, quotient) == 6
    # a discriminant starting at q^2 doubles the order of every factor
    monkeypatch.setattr(eta, "delta_qexp", lambda T: QSeries(2, euler_product(T).unit, T))
    assert ord_at_infinity(modulus, quotient) == 12
    result = check_character(modulus, (-1, -1))
    assert result.ligozat_matches
    assert result.ligozat_infinity == 6
    assert not result.passed


def test_check_character_records_ligozat_order_at_infinity():
    result = check_character(N11, (-1,))
    assert result.infinity_order == result.ligozat_infinity == result.infinity_expected == -10
    assert result.passed
