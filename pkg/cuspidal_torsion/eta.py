"""Independent NF oracle built from discriminant quotients prod Delta(m tau)^(r_m).

Two independent routes to the divisor of Delta^e are provided: Ligozat's
vanishing-order formula at every cusp, and genuine q-series multiplication
for the order at the cusp at infinity. The lattice of Ligozat divisors gives
the cuspidal divisor class group by SNF.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Tuple

from .cusps import (
    CuspDivisor,
    all_ones,
    characters,
    cusp_elements,
    degree_zero_coordinates,
    eigendivisor,
    identity_character,
    m_of_w,
    pairing,
)
from .errors import DomainError, TruncationError
from .groups import LocalizedAbelianGroup
from .qseries import QSeries, delta_qexp, dilate_polynomial, polynomial_product
from .smith import cokernel_invariants
from .torsion import d_of_char

logger = logging.getLogger(__name__)

TRUNCATION_FACTOR = 8


def _require_nf(modulus):
    if not modulus.setting.is_nf:
        raise DomainError("the discriminant oracle is only available in the NF setting")


def default_truncation(modulus):
    """8 N."""
    return TRUNCATION_FACTOR * modulus.level_norm


@dataclass(frozen=True)
class EtaQuotient:
    """prod over m | N of Delta(m tau)^(r_m), exponents kept as sorted (m, r_m) pairs."""

    level: int
    exponents: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        merged = {}
        for m, r in self.exponents:
            if self.level % m:
                raise DomainError(f"{m} does not divide the level {self.level}")
            merged[m] = merged.get(m, 0) + r
        object.__setattr__(self, "exponents", tuple(sorted((m, r) for m, r in merged.items() if r)))

    def as_dict(self):
        return dict(self.exponents)

    @property
    def leading_exponent(self):
        """sum over m of m * r_m."""
        return sum(m * r for m, r in self.exponents)

    def __str__(self):
        return " * ".join(f"Delta({m}z)^{r}" for m, r in self.exponents) or "1"


def eta_quotient_of_char(modulus, e):
    """Delta^e = prod over w of Delta(m(w) z)^<e, w>."""
    _require_nf(modulus)
    if len(e) != modulus.s:
        raise DomainError("character length differs from s")
    pairs = tuple((m_of_w(modulus, w), pairing(e, w)) for w in cusp_elements(modulus.s))
    return EtaQuotient(modulus.level_norm, pairs)


def expand(quotient, T):
    """q-expansion of the quotient modulo q^T.

    The factors Delta(m z) with r_m > 0 are multiplied out as polynomials in
    q, and so are those with r_m < 0; the two products are then divided as
    series. Both valuations are read off the product coefficients.

    Raises:
        TruncationError: if T does not exceed the valuation of the expansion
    """
    # working precision with room for denominators of up to twice the weight
    bottom_weight = sum(-m * r for m, r in quotient.exponents if r < 0)
    top_limit = T + 2 * bottom_weight
    bottom_limit = T + 4 * bottom_weight
    if top_limit < 1:
        raise TruncationError(f"truncation {T} is below the expansion range")
    delta = delta_qexp(max(top_limit, bottom_limit)).to_polynomial()

    def product(sign, limit):
        factors = []
        for m, r in quotient.exponents:
            if r * sign > 0:
                factors.extend([dilate_polynomial(delta, m, limit)] * abs(r))
        return QSeries.from_polynomial(polynomial_product(factors, limit), limit)

    series = product(1, top_limit)
    if bottom_weight:
        series = series / product(-1, bottom_limit)
    precision = T - series.valuation
    if precision < 1:
        raise TruncationError(f"truncation {T} does not reach the leading exponent {series.valuation}")
    if precision > series.precision:
        raise TruncationError(f"only {series.precision} terms known, {precision} requested")
    logger.debug("expanded %s to O(q^%d)", quotient, T)
    return series.truncate(precision)


def ord_at_infinity(modulus, quotient, T=None):
    """Leading q-exponent of the expanded quotient (order at [1/N])."""
    _require_nf(modulus)
    T = default_truncation(modulus) if T is None else T
    series = expand(quotient, T)
    if series.leading_coefficient == 0:
        raise TruncationError("leading coefficient vanished within the truncation")
    return series.valuation


def ligozat_orders(modulus, quotient):
    """Order of vanishing of the quotient at every cusp.

    For squarefree N the cusp [1/c] with c = m(w) has order
    sum over delta of N gcd(c, delta)^2 r_delta / (c delta).

    Raises:
        DomainError: if some order is not an integer
    """
    _require_nf(modulus)
    n = modulus.level_norm
    coeffs = []
    for w in cusp_elements(modulus.s):
        c = m_of_w(modulus, w)
        order = sum(
            (Fraction(n * gcd(c, delta) ** 2 * r, c * delta) for delta, r in quotient.exponents),
            Fraction(0),
        )
        if order.denominator != 1:
            raise DomainError(f"order {order} at the cusp [1/{c}] is not integral")
        coeffs.append(int(order))
    return CuspDivisor(modulus.s, tuple(coeffs))


def principal_lattice(modulus):
    """Ligozat divisors of Delta^e for e != 1_E, in D_2 coordinates."""
    return [
        degree_zero_coordinates(ligozat_orders(modulus, eta_quotient_of_char(modulus, e)))
        for e in characters(modulus.s)
        if e != identity_character(modulus.s)
    ]


def cuspidal_group_oracle(modulus, extra_inverted=()):
    """D_2 modulo the Ligozat lattice, localized away from 6."""
    _require_nf(modulus)
    rank = 2**modulus.s - 1
    torsion, free = cokernel_invariants(principal_lattice(modulus), rank)
    if free:
        raise DomainError("the discriminant quotients do not span a full-rank lattice")
    return LocalizedAbelianGroup(torsion, frozenset({2, 3}) | frozenset(extra_inverted))


@dataclass(frozen=True)
class EtaCheck:
    """Outcome of the two independent order computations for one (N, e)."""

    level: int
    character: Tuple[int, ...]
    ligozat_matches: bool
    infinity_order: int
    infinity_expected: int
    ligozat_infinity: int

    @property
    def passed(self):
        return (
            self.ligozat_matches
            and self.infinity_order == self.infinity_expected
            and self.infinity_order == self.ligozat_infinity
        )


def check_character(modulus, e, T=None):
    """Run the Ligozat and series checks for one character.

    The Ligozat divisor must equal d(e) D^e, and the series order at infinity
    must equal both sum <e,w> m(w) and the Ligozat order at [w_inf].
    """
    quotient = eta_quotient_of_char(modulus, e)
    divisor = ligozat_orders(modulus, quotient)
    expected = d_of_char(modulus, e) * eigendivisor(modulus.s, e)
    infinity = ord_at_infinity(modulus, quotient, T)
    target = sum(pairing(e, w) * m_of_w(modulus, w) for w in cusp_elements(modulus.s))
    at_infinity = divisor[all_ones(modulus.s)]
    if at_infinity != infinity:
        logger.warning("series and Ligozat disagree at infinity for N=%d", modulus.level_norm)
    return EtaCheck(modulus.level_norm, tuple(e), divisor == expected, infinity, target, at_infinity)
