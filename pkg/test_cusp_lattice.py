"""Tests for cusps, characters, eigendivisors and the lattices D1, D2, D3."""

import random
from fractions import Fraction

import numpy as np
import pytest

from cuspidal_torsion.base_ring import Modulus
from cuspidal_torsion.cusps import (
    CuspDivisor,
    D_e,
    atkin_lehner,
    characters,
    coker_D2_to_D3,
    cusp_elements,
    cusp_label,
    dp2_basis,
    e_part,
    eigendivisor,
    expand_in_dp2_basis,
    format_character,
    index_closed_form,
    lattice_index_D2_D1,
    m_of_w,
    pairing,
    pairing_det_closed_form,
    pairing_matrix,
    parse_character,
    recursive_pairing_matrix,
    sum_of_eigendivisors,
)
from cuspidal_torsion.errors import DomainError, LocalizationError
from cuspidal_torsion import smith
from cuspidal_torsion.smith import SnfResult, cokernel_invariants, smith_normal_form

N14 = Modulus.nf(2, 7)


def _modulus(s):
    return Modulus.nf(*[5, 7, 11, 13][:s])


def test_ordering_is_lexicographic():
    assert cusp_elements(2) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert [format_character(e) for e in characters(2)] == ["++", "+-", "-+", "--"]
    assert parse_character("+-") == (1, -1)


@pytest.mark.parametrize(
    "e, w, expected",
    [
        ((1, 1), (1, 1), 1),
        ((-1, 1), (1, 1), -1),
        ((-1, -1, 1), (1, 1, 0), 1),
    ],
)
def test_pairing(e, w, expected):
    assert pairing(e, w) == expected


@pytest.mark.parametrize("w, expected", [((0, 0), 1), ((1, 0), 2), ((1, 1), 14)])
def test_m_of_w(w, expected):
    assert m_of_w(N14, w) == expected


def test_cusp_labels():
    assert cusp_label(N14, (0, 0)) == "[1]"
    assert cusp_label(N14, (1, 1)) == "[1/14]"


def test_eigendivisors():
    assert eigendivisor(1, (-1,)).coeffs == (1, -1)
    assert eigendivisor(1, (1,)).degree == 2
    assert eigendivisor(2, (-1, -1)).coeffs == (1, -1, -1, 1)


def test_atkin_lehner_acts_by_eigenvalue():
    D = eigendivisor(1, (-1,))
    assert atkin_lehner((1,), D) == -D
    D = eigendivisor(2, (-1, -1))
    assert atkin_lehner((1, 0), D) == -D
    assert atkin_lehner((0, 0), D) == D


@pytest.mark.parametrize("s, det", [(1, 2), (2, 16), (3, 4096)])
def test_pairing_determinant(s, det):
    matrix, value = pairing_matrix(s)
    assert value == det == pairing_det_closed_form(s)
    assert (recursive_pairing_matrix(s) == matrix).all()


@pytest.mark.parametrize("s, index", [(1, 1), (2, 4), (3, 512)])
def test_lattice_index(s, index):
    assert lattice_index_D2_D1(_modulus(s)) == index == index_closed_form(s)


@pytest.mark.parametrize("s", [1, 2, 3])
def test_coker_D2_to_D3_has_order_two_to_the_s(s):
    assert coker_D2_to_D3(_modulus(s)).full_order == 2**s


def test_sum_of_eigendivisors():
    s = 3
    zero = CuspDivisor.cusp(s, (0, 0, 0))
    for i in range(1, s + 1):
        w = tuple(1 if j == i - 1 else 0 for j in range(s))
        assert sum_of_eigendivisors(s, i) == 4 * (zero - CuspDivisor.cusp(s, w))


def test_e_part_needs_two_inverted():
    with pytest.raises(LocalizationError):
        e_part(CuspDivisor.cusp(2, (0, 0)), (1, -1), inverted=())


def test_e_part_projection():
    e = (-1, 1)
    assert e_part(eigendivisor(2, e), e).scalar == 1
    assert e_part(eigendivisor(2, (-1, -1)), e).scalar == 0
    component = e_part(CuspDivisor.cusp(2, (0, 0)), e)
    assert component.scalar == Fraction(1, 4)
    total = [Fraction(0)] * 4
    for f in characters(2):
        for k, c in enumerate(e_part(CuspDivisor.cusp(2, (1, 0)), f).coefficients()):
            total[k] += c
    assert total == [0, 0, 1, 0]


@pytest.mark.parametrize("s", [1, 2, 3])
def test_dp2_basis_expansion_reconstructs_divisor(s):
    basis = dict(dp2_basis(_modulus(s)))
    assert len(basis) == 2**s - 1
    rng = random.Random(s)
    for _ in range(20):
        coeffs = [rng.randint(-5, 5) for _ in range(2**s - 1)]
        divisor = CuspDivisor(s, tuple([-sum(coeffs)] + coeffs))
        rebuilt = CuspDivisor.zero(s)
        for key, c in expand_in_dp2_basis(divisor).items():
            rebuilt = rebuilt + c * basis[key]
        assert rebuilt == divisor


def test_expansion_needs_degree_zero():
    with pytest.raises(DomainError):
        expand_in_dp2_basis(CuspDivisor.cusp(2, (0, 1)))


def test_cusp_divisor_dict_round_trip():
    divisor = CuspDivisor(2, (3, 0, -1, -2))
    assert CuspDivisor.from_dict(divisor.to_dict()) == divisor
    assert str(divisor) == "+3[00] -1[10] -2[11]"


def test_smith_normal_form_transforms():
    matrix = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    snf = smith_normal_form(matrix, check=True)
    assert snf.diagonal == (2, 6, 12)
    assert snf.check()


def test_smith_normal_form_rectangular():
    snf = smith_normal_form(np.array([[2, 4], [6, 8], [0, 0]], dtype=object), check=True)
    assert snf.invariant_factors == (2, 4)


def test_cokernel_invariants():
    assert cokernel_invariants([[2, 0], [0, 3]], 2) == ((6,), 0)
    assert cokernel_invariants([[2, 0]], 2) == ((2,), 1)
    assert cokernel_invariants([], 3) == ((), 3)


def test_decompositions_are_verified_without_explicit_check(monkeypatch):
    calls = []
    monkeypatch.setattr(SnfResult, "check", lambda self: calls.append(self.diagonal) or True)
    assert smith.VERIFY_DECOMPOSITIONS
    cokernel_invariants([[2, 0], [0, 3]], 2)
    assert calls == [(1, 6)]
    smith_normal_form([[4]], check=False)
    assert len(calls) == 1
    monkeypatch.setattr(smith, "VERIFY_DECOMPOSITIONS", False)
    smith_normal_form([[4]])
    assert len(calls) == 1


def test_D_e_checks_character_length():
    assert D_e(N14, (-1, 1)) == eigendivisor(2, (-1, 1))
    assert D_e(N14, (1, 1)).degree == 4
    with pytest.raises(DomainError):
        D_e(N14, (-1,))
