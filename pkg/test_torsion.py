"""Tests for the closed-form torsion groups and their ell-parts."""

from fractions import Fraction

import pytest

from cuspidal_torsion.base_ring import Modulus
from cuspidal_torsion.errors import DomainError, ExcludedCaseError
from cuspidal_torsion.groups import LocalizedAbelianGroup, diagonal_invariants, invariant_chain
from cuspidal_torsion.torsion import (
    EPartTable,
    M_j,
    cuspidal_ell_part,
    d_of_char,
    d_of_char_from_primes,
    e_h_divisibility_holds,
    epart_table,
    gen_jacobian_ell_part,
    gen_jacobian_torsion,
    is_subquotient_chain,
    jacobian_torsion,
    mu_torsion,
    mu_torsion_rank,
    prime_level_torsion_order,
    stated_ff_prime_order,
    torsion_summary,
)

N11 = Modulus.nf(11)
N14 = Modulus.nf(2, 7)
FF_CUBIC = Modulus.ff(2, "t^3+t+1")


@pytest.mark.parametrize(
    "modulus, e, expected",
    [
        (N11, (-1,), 10),
        (N14, (-1, -1), 6),
        (Modulus.ff(2, "t", "t+1"), (-1, 1), 3),
    ],
)
def test_d_of_char(modulus, e, expected):
    assert d_of_char(modulus, e) == expected
    assert d_of_char_from_primes(modulus, e) == expected


def test_invariant_chain_merges_cyclic_factors():
    assert invariant_chain((6, 8, 3)) == (6, 24)
    assert diagonal_invariants((6, 8, 3)) == (6, 24)
    assert invariant_chain((1, 1)) == ()


def test_localized_group_equality_uses_reduced_form():
    assert LocalizedAbelianGroup((10,), {2, 3}) == LocalizedAbelianGroup((5,))
    assert LocalizedAbelianGroup((6, 24), {2, 3}).is_trivial()
    group = LocalizedAbelianGroup((12, 60))
    assert group.localized_at(2).reduced == (4, 4)
    assert LocalizedAbelianGroup.from_dict(group.to_dict()) == group


def test_M_j():
    assert M_j(N11, 1).factors == (10,)
    assert M_j(N11, 2).factors == ()
    # d-values 18, 8, 6 for the characters +-, -+, --
    assert M_j(N14, 1).factors == (2, 6, 72)
    with pytest.raises(DomainError):
        M_j(N11, 3)


def test_jacobian_torsion_prime_level_eleven():
    group = jacobian_torsion(N11)
    assert group.factors == (10,)
    assert group.reduced == (5,)


def test_jacobian_torsion_fourteen_is_trivial_away_from_six():
    assert jacobian_torsion(N14).is_trivial()


def test_jacobian_torsion_ff_cubic():
    assert jacobian_torsion(FF_CUBIC).reduced == (7,)


def test_extra_inverted_primes():
    assert jacobian_torsion(N11, extra_inverted=(5,)).is_trivial()
    with pytest.raises(DomainError):
        jacobian_torsion(N11, extra_inverted=(4,))


@pytest.mark.parametrize(
    "modulus, order",
    [(N11, 5), (Modulus.nf(37), 3), (FF_CUBIC, 7)],
)
def test_prime_level_torsion_order(modulus, order):
    assert prime_level_torsion_order(modulus) == order


def test_prime_level_needs_prime():
    with pytest.raises(DomainError):
        prime_level_torsion_order(N14)


def test_stated_ff_formula_disagrees_for_degree_one():
    modulus = Modulus.ff(2, "t")
    assert prime_level_torsion_order(modulus) == 1
    assert stated_ff_prime_order(modulus) == Fraction(2)


def test_gen_jacobian_trivial_for_prime_level():
    assert gen_jacobian_torsion(N11).is_trivial()
    assert gen_jacobian_torsion(Modulus.nf(3, 5)).is_trivial()


def test_mu_torsion():
    assert mu_torsion_rank(N11) == 1
    assert mu_torsion_rank(Modulus.nf(5, 7, 11)) == 7
    assert mu_torsion(N14).is_trivial()
    assert mu_torsion(Modulus.ff(4, "t")).full_order == 3


def test_cuspidal_ell_part_e_H_branch():
    # e_H = ((11/3)) = (-1) for N = 11
    assert cuspidal_ell_part(N11, 5, (-1,)) == 5
    assert cuspidal_ell_part(N11, 5, (1,)) == 1


def test_cuspidal_ell_part_divides_by_b():
    modulus = Modulus.nf(7, 13)
    # e_H is trivial here, so the 3-part of d(e) = 72 is divided by b = 3
    assert cuspidal_ell_part(modulus, 3, (-1, -1)) == 3


@pytest.mark.parametrize(
    "modulus, ell",
    [(Modulus.ff(3, "t"), 3), (N11, 2), (Modulus.nf(3, 5), 3)],
)
def test_cuspidal_ell_part_excluded(modulus, ell):
    with pytest.raises(ExcludedCaseError):
        cuspidal_ell_part(modulus, ell, (-1,) * modulus.s)


@pytest.mark.parametrize("level", [(7, 11), (7, 13), (5, 7, 11)])
def test_e_H_divisibility(level):
    assert e_h_divisibility_holds(Modulus.nf(*level))


def test_gen_jacobian_three_part():
    modulus = Modulus.nf(7, 11)
    group = gen_jacobian_ell_part(modulus, 3)
    # M2' has the single character (-1, -1) with d = 6 * 10 = 60
    assert group.reduced == ()
    modulus = Modulus.nf(5, 17)
    assert gen_jacobian_ell_part(modulus, 3).reduced == ()


def test_gen_jacobian_ell_part_needs_three_coprime_level():
    with pytest.raises(ExcludedCaseError):
        gen_jacobian_ell_part(Modulus.nf(3, 7), 3)


def test_epart_table_chain_and_round_trip():
    modulus = Modulus.nf(5, 7, 11)
    table = epart_table(modulus)
    assert EPartTable.from_dict(table.to_dict()).to_dict() == table.to_dict()
    assert table.total_gen_jacobian() == gen_jacobian_torsion(modulus)
    for e in [(-1, 1, 1), (-1, -1, 1), (-1, -1, -1)]:
        m, tilde = table[e]
        assert is_subquotient_chain(tilde, m)


def test_torsion_summary_is_plain_data():
    summary = torsion_summary(N11, ells=(5, 3))
    assert summary["prime_level_order"] == 5
    assert summary["jacobian_torsion"]["reduced"] == [5]
    assert summary["ell_parts"]["5"] == {"+": 1, "-": 5}
    assert summary["mu_torsion_rank"] == 1
