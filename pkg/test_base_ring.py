"""Tests for settings, primes, moduli and monomials."""

import pytest

from cuspidal_torsion.base_ring import (
    Modulus,
    Monomial,
    PrimeElt,
    Setting,
    constants,
    e_H,
    format_polynomial,
    hecke_eligible_prime,
    irreducible_polys,
    is_irreducible,
    norm,
    parse_level,
    parse_polynomial,
)
from cuspidal_torsion.errors import DomainError, UndefinedCharacterError

NF = Setting.nf()


def test_constants():
    assert (constants(NF).k, constants(NF).b, constants(NF).a) == (12, 3, 6)
    ff = constants(Setting.ff(4))
    assert (ff.k, ff.b, ff.a) == (15, 5, 60)


def test_ff_setting_needs_prime_power():
    with pytest.raises(DomainError):
        Setting.ff(6)


@pytest.mark.parametrize(
    "prime, expected",
    [
        (PrimeElt(NF, 7), 7),
        (PrimeElt(Setting.ff(3), (1, 0)), 3),
        (PrimeElt(Setting.ff(2), (1, 0, 1, 1)), 8),
    ],
)
def test_norm(prime, expected):
    assert norm(prime) == expected
    assert prime.norm == expected


@pytest.mark.parametrize(
    "q, poly, expected",
    [
        (2, (1, 1, 1), True),
        (2, (1, 0, 1), False),
        (3, (1, 0), True),
    ],
)
def test_is_irreducible(q, poly, expected):
    assert is_irreducible(q, poly) is expected


def test_is_irreducible_rejects_non_monic():
    with pytest.raises(DomainError):
        is_irreducible(3, (2, 1))


def test_reducible_prime_rejected():
    with pytest.raises(DomainError):
        PrimeElt(Setting.ff(2), (1, 0, 1))
    with pytest.raises(DomainError):
        PrimeElt(NF, 15)


def test_irreducible_polys_counts():
    # monic irreducibles over GF(2): 2, 1, 2, 3 in degrees 1..4
    assert [len(irreducible_polys(2, d)) for d in range(1, 5)] == [2, 1, 2, 3]


def test_hecke_eligible_prime():
    assert hecke_eligible_prime(Modulus.nf(11), PrimeElt(NF, 2))
    assert not hecke_eligible_prime(Modulus.nf(2, 7), PrimeElt(NF, 7))
    assert hecke_eligible_prime(Modulus.ff(2, "t"), PrimeElt(Setting.ff(2), (1, 1)))


def test_e_H_nf_legendre_symbols():
    assert e_H(Modulus.nf(11, 7)) == (-1, 1)


def test_e_H_ff_degree_parities():
    assert e_H(Modulus.ff(3, "t", "t^2+1")) == (-1, 1)


def test_e_H_undefined_when_three_divides_level():
    with pytest.raises(UndefinedCharacterError):
        e_H(Modulus.nf(3, 5))


def test_parse_level_nf_factors_in_ascending_order():
    modulus = parse_level(NF, "77")
    assert [p.value for p in modulus.primes] == [7, 11]
    assert modulus.level == 77


def test_parse_level_keeps_explicit_order():
    modulus = parse_level(NF, "11,7")
    assert [p.value for p in modulus.primes] == [11, 7]


@pytest.mark.parametrize("text", ["12", "1", "abc"])
def test_parse_level_nf_rejects(text):
    with pytest.raises(DomainError):
        parse_level(NF, text)


def test_parse_level_ff_product():
    modulus = parse_level(Setting.ff(2), "t(t+1)")
    assert modulus.s == 2
    assert modulus.norms == (2, 2)
    assert modulus.level_norm == 4


def test_parse_level_ff_accepts_capital_variable():
    modulus = parse_level(Setting.ff(2), "T^3+T+1")
    assert modulus.primes[0].value == (1, 0, 1, 1)


def test_parse_level_ff_not_squarefree():
    # t^2 + 1 = (t + 1)^2 over GF(2)
    with pytest.raises(DomainError):
        parse_level(Setting.ff(2), "t^2+1")


def test_parse_polynomial_and_format():
    coeffs = parse_polynomial(Setting.ff(3), "t^3 + 2t + 1")
    assert coeffs == (1, 0, 2, 1)
    assert format_polynomial(coeffs) == "t^3+2t+1"


def test_modulus_rejects_repeated_primes():
    with pytest.raises(DomainError):
        Modulus.nf(5, 5)


def test_monomial_prints_factored_power():
    p = PrimeElt(NF, 11)
    assert str(Monomial.prime_power(p, -12)) == "11^-12"
    assert str(Monomial(NF, -1, ((PrimeElt(NF, 2), 3),))) == "-1*2^3"
    assert str(Monomial.one(NF)) == "1"


def test_monomial_arithmetic():
    p, r = PrimeElt(NF, 5), PrimeElt(NF, 2)
    x = Monomial(NF, -1, ((p, 2), (r, -1)))
    assert (x * x.inverse()).is_one()
    assert (x**3).exponent(p) == 6
    assert (x**3).unit == -1
    assert (x**2).unit == 1
    assert [q.value for q, _ in x.exponents] == [2, 5]


def test_monomial_ff_units():
    setting = Setting.ff(5)
    x = Monomial(setting, 2)
    assert (x * x).unit == 4
    assert (x * x.inverse()).is_one()
    with pytest.raises(DomainError):
        Monomial(setting, 0)


def test_monomial_dict_round_trip():
    setting = Setting.ff(3)
    p = PrimeElt(setting, (1, 0, 1))
    x = Monomial(setting, 2, ((p, -4),))
    assert Monomial.from_dict(setting, x.to_dict()) == x
