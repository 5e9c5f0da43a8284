"""Tests for the Hecke action on L and the Eisenstein checks."""

import json
import random

import pytest

from cuspidal_torsion import report
from cuspidal_torsion.base_ring import Modulus, Monomial, PrimeElt, Setting
from cuspidal_torsion.cusps import CuspDivisor
from cuspidal_torsion.errors import DomainError
from cuspidal_torsion.hecke import (
    EisensteinRow,
    LBatch,
    LElement,
    LocalUnitClass,
    apply_eisenstein,
    apply_hecke,
    commute_holds,
    commute_on,
    ctilde_eisenstein_holds,
    d3_basis_batch,
    d3_eisenstein_holds,
    divisor_action_holds,
    eisenstein_away_from_two,
    eisenstein_batch,
    eisenstein_report,
    exponent_two_holds,
    hecke_batch,
    hecke_on_cusp_divisor,
    hecke_primes,
    parse_prime_range,
    random_l0,
    random_l0_batch,
    two_torsion_obstruction,
    unit_group,
)

NF = Setting.nf()
TWO = PrimeElt(NF, 2)
N11 = Modulus.nf(11)
N35 = Modulus.nf(5, 7)
N105 = Modulus.nf(3, 5, 7)
FF = Modulus.ff(3, "t", "t+1")
FF_PRIME = PrimeElt(Setting.ff(3), (1, 2))


def _samples(modulus, p, count, seed=0):
    rng = random.Random(seed)
    pool = list(modulus.primes) + [p]
    return [random_l0(modulus, rng, pool) for _ in range(count)]


def test_hecke_on_cusp_divisors():
    divisor = CuspDivisor(1, (1, -1))
    assert hecke_on_cusp_divisor(N11, TWO, divisor) == 3 * divisor


def test_hecke_needs_prime_outside_level():
    with pytest.raises(DomainError):
        hecke_on_cusp_divisor(N11, PrimeElt(NF, 11), CuspDivisor(1, (1, -1)))


def test_hecke_primes():
    assert [p.value for p in hecke_primes(N11, 13)] == [2, 3, 5, 7, 13]
    ff = hecke_primes(Modulus.ff(2, "t"), 4)
    assert [p.value for p in ff] == [(1, 1), (1, 1, 1)]


def test_parse_prime_range():
    assert [p.value for p in parse_prime_range(N11, "2..10")] == [2, 3, 5, 7]
    assert [p.value for p in parse_prime_range(N11, "3..7")] == [3, 5, 7]
    assert [p.value for p in parse_prime_range(N11, "2,13")] == [2, 13]
    with pytest.raises(DomainError):
        parse_prime_range(N11, "11")
    with pytest.raises(DomainError):
        parse_prime_range(N11, "a..b")


def test_random_l0_has_total_valuation_zero():
    for x in _samples(N105, TWO, 20):
        assert x.is_l0()


def test_eisenstein_needs_l0():
    x = LElement.from_valuations(N11, {(0,): 1})
    with pytest.raises(DomainError):
        apply_eisenstein(N11, TWO, x)


def test_hecke_scales_valuations():
    x = LElement.from_valuations(N11, {(0,): 1, (1,): -1})
    image = apply_hecke(N11, TWO, x)
    assert image.divisor() == CuspDivisor(1, (3, -3))
    assert image[(0,)].leading == Monomial(NF, -1)


@pytest.mark.parametrize("modulus, p", [(N11, TWO), (N35, TWO), (N105, TWO), (FF, FF_PRIME)])
def test_divisor_action_and_d3_are_eisenstein(modulus, p):
    assert divisor_action_holds(modulus, p)
    assert d3_eisenstein_holds(modulus, p)


@pytest.mark.parametrize("modulus, p", [(N35, TWO), (N105, TWO), (N35, PrimeElt(NF, 3)), (FF, FF_PRIME)])
def test_exponent_two(modulus, p):
    assert exponent_two_holds(modulus, p, _samples(modulus, p, 200))


def test_eisenstein_image_has_valuation_zero():
    for x in _samples(N105, TWO, 20, seed=5):
        once = apply_eisenstein(N105, TWO, x)
        assert all(c.valuation == 0 for c in once.components)


def test_ctilde_for_odd_and_even_primes():
    assert ctilde_eisenstein_holds(N11, TWO)
    assert not ctilde_eisenstein_holds(N35, TWO)
    away = eisenstein_away_from_two(N35, 20)
    assert "2" not in away
    assert away and all(away.values())


def test_obstruction_nonzero_for_three_primes():
    result = two_torsion_obstruction(N105, TWO)
    assert result.nonzero
    assert result.support == ((0, 0, 0), (0, 1, 1), (1, 0, 0), (1, 1, 1))
    data = result.to_dict()
    assert data["support"] == ["000", "011", "100", "111"]
    assert data["nonzero"] is True
    assert data["lift"]["000"]["valuation"] == 1


@pytest.mark.parametrize("level", [(11,), (5, 7), (3, 5), (13,)])
def test_obstruction_vanishes_for_at_most_two_primes(level):
    assert not two_torsion_obstruction(Modulus.nf(*level), TWO).nonzero


@pytest.mark.parametrize(
    "modulus, p",
    [(Modulus.nf(2, 7), PrimeElt(NF, 3)), (N105, PrimeElt(NF, 11)), (FF, FF_PRIME)],
)
def test_obstruction_domain(modulus, p):
    with pytest.raises(DomainError):
        two_torsion_obstruction(modulus, p)


def test_hecke_operators_commute():
    eleven = PrimeElt(NF, 11)
    for x in _samples(N105, TWO, 20, seed=2):
        assert commute_on(N105, TWO, eleven, x)


def test_l_element_dict_round_trip():
    x = _samples(FF, FF_PRIME, 1, seed=9)[0]
    assert LElement.from_dict(FF, x.to_dict()) == x


def test_d3_class_needs_valuation_zero():
    x = LElement.from_valuations(N11, {(0,): 1, (1,): -1})
    with pytest.raises(DomainError):
        x.d3_class()
    one = LocalUnitClass(0, Monomial.one(NF))
    minus = LocalUnitClass(0, Monomial(NF, -1))
    assert LElement(N11, (minus, minus)).is_zero_in_d3()
    assert not LElement(N11, (one, minus)).is_zero_in_d3()


def test_eisenstein_report_for_three_primes():
    rows = eisenstein_report(N105, [TWO], samples=100)
    assert len(rows) == 1
    row = rows[0]
    assert row.passed
    assert not row.ctilde_eisenstein
    assert row.obstruction.nonzero
    assert row.to_dict()["obstruction"]["nonzero"] is True


def test_unit_group_logs():
    nf = unit_group(NF)
    assert nf.order == 2
    assert nf.log(-1) == nf.minus_one_log == 1
    ff = unit_group(Setting.ff(5))
    assert ff.order == 4
    assert sorted(ff.units) == [1, 2, 3, 4]
    assert all(ff.exp(ff.log(u)) == u for u in ff.units)
    assert ff.exp(ff.minus_one_log) == 4
    assert unit_group(Setting.ff(2)).minus_one_log == 0
    with pytest.raises(DomainError):
        ff.log(0)


@pytest.mark.parametrize("modulus, p", [(N105, TWO), (N35, PrimeElt(NF, 3)), (FF, FF_PRIME)])
def test_batch_matches_single_elements(modulus, p):
    pool = list(modulus.primes) + [p]
    batch = random_l0_batch(modulus, random.Random(4), pool, 25)
    hecke = hecke_batch(modulus, p, batch)
    once = eisenstein_batch(modulus, p, batch)
    for i, x in enumerate(batch.elements()):
        assert x.is_l0()
        assert hecke.element(i) == apply_hecke(modulus, p, x)
        assert once.element(i) == apply_eisenstein(modulus, p, x)


def test_batch_from_elements_keeps_rows():
    pool = list(N105.primes) + [TWO]
    batch = random_l0_batch(N105, random.Random(8), pool, 10)
    packed = LBatch.from_elements(N105, batch.elements(), batch.pool)
    assert packed.rows_equal(batch).all()
    with pytest.raises(DomainError):
        LBatch.from_elements(N105, batch.elements(), pool=())


def test_random_l0_is_the_first_batch_row():
    pool = list(N35.primes) + [TWO]
    single = random_l0(N35, random.Random(1), pool)
    batch = random_l0_batch(N35, random.Random(1), pool, 3)
    assert single == batch.element(0)
    assert len(batch.head(2)) == 2


def test_batch_eisenstein_needs_l0():
    batch = LBatch.from_elements(N11, [LElement.from_valuations(N11, {(0,): 1})])
    with pytest.raises(DomainError):
        eisenstein_batch(N11, TWO, batch)


def test_d3_basis_batch_rows():
    batch = d3_basis_batch(N35, TWO)
    # four cusps times the generators 5, 7, 2 and -1
    assert len(batch) == 16
    assert batch.valuation_zero().all()
    assert not batch.is_identity().any()
    assert eisenstein_batch(N35, TWO, batch).is_identity().all()


def test_batched_commutation():
    pool = list(N105.primes) + [TWO, PrimeElt(NF, 11)]
    batch = random_l0_batch(N105, random.Random(6), pool, 50)
    assert commute_holds(N105, TWO, PrimeElt(NF, 11), batch)


def test_eisenstein_rows_survive_json():
    rows = eisenstein_report(N105, [TWO, PrimeElt(NF, 11)], samples=20)
    for row in rows:
        data = json.loads(report.to_json(row.to_dict()))
        assert EisensteinRow.from_dict(N105, data) == row
    assert rows[0].obstruction is not None
    assert rows[1].obstruction is None
