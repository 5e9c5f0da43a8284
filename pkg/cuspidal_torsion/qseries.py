"""Truncated Laurent series in q with exact rational coefficients.

A series is stored as q^v * u where u is a unit of Q[[q]] known modulo
q^precision. Arithmetic runs on sympy's sparse polynomial ring with the
``ring_series`` helpers, so every coefficient stays an exact rational.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

from sympy import QQ
from sympy.polys.ring_series import rs_mul, rs_pow, rs_series_inversion, rs_trunc
from sympy.polys.rings import PolyElement, ring

from .errors import TruncationError

logger = logging.getLogger(__name__)

R, q = ring("q", QQ)


def _to_fraction(c):
    return Fraction(int(c.numerator), int(c.denominator))


@dataclass(frozen=True, eq=False)
class QSeries:
    """q^valuation * unit + O(q^(valuation + precision))."""

    valuation: int
    unit: PolyElement
    precision: int

    def __post_init__(self):
        if self.precision < 1:
            raise TruncationError(f"precision must be positive, got {self.precision}")
        unit = rs_trunc(self.unit, q, self.precision)
        if unit.get(R.zero_monom, 0) == 0:
            raise TruncationError("the unit part has a zero constant term")
        object.__setattr__(self, "unit", unit)

    @classmethod
    def from_coefficients(cls, coeffs, valuation=0):
        """Series with the given coefficients starting at q^valuation.

        Leading zeros are absorbed into the valuation; the truncation point
        stays at valuation + len(coeffs).

        Raises:
            TruncationError: if every coefficient is zero
        """
        coeffs = [QQ(Fraction(c).numerator, Fraction(c).denominator) for c in coeffs]
        shift = 0
        while shift < len(coeffs) and coeffs[shift] == 0:
            shift += 1
        if shift == len(coeffs):
            raise TruncationError("no nonzero coefficient within the truncation")
        unit = R({(i,): c for i, c in enumerate(coeffs[shift:]) if c})
        return cls(valuation + shift, unit, len(coeffs) - shift)

    @classmethod
    def from_polynomial(cls, poly, truncation):
        """The series poly + O(q^truncation) for a polynomial in ``q``.

        The valuation is the lowest exponent with a nonzero coefficient below
        the truncation.

        Raises:
            TruncationError: if no coefficient below the truncation is nonzero
        """
        terms = {e: c for (e,), c in poly.items() if e < truncation and c}
        if not terms:
            raise TruncationError(f"the polynomial vanishes modulo q^{truncation}")
        valuation = min(terms)
        unit = R({(e - valuation,): c for e, c in terms.items()})
        return cls(valuation, unit, truncation - valuation)

    def to_polynomial(self):
        """The known coefficients as a polynomial in ``q`` (valuation must be >= 0)."""
        if self.valuation < 0:
            raise TruncationError("a Laurent tail has no polynomial form")
        return R({(e + self.valuation,): c for (e,), c in self.unit.items()})

    @classmethod
    def one(cls, precision):
        return cls(0, R(1), precision)

    @property
    def truncation(self):
        """Absolute order T of the error term O(q^T)."""
        return self.valuation + self.precision

    @property
    def leading_coefficient(self):
        return _to_fraction(self.unit.get(R.zero_monom, QQ.zero))

    def coefficient(self, n):
        """Coefficient of q^n.

        Raises:
            TruncationError: if n lies at or beyond the truncation
        """
        if n >= self.truncation:
            raise TruncationError(f"q^{n} lies beyond the truncation O(q^{self.truncation})")
        if n < self.valuation:
            return Fraction(0)
        return _to_fraction(self.unit.get((n - self.valuation,), QQ.zero))

    def coefficients(self):
        """Coefficients of q^valuation ... q^(truncation - 1)."""
        return [self.coefficient(n) for n in range(self.valuation, self.truncation)]

    def truncate(self, precision):
        return QSeries(self.valuation, self.unit, min(precision, self.precision))

    def __mul__(self, other):
        precision = min(self.precision, other.precision)
        return QSeries(
            self.valuation + other.valuation,
            rs_mul(self.unit, other.unit, q, precision),
            precision,
        )

    def inverse(self):
        return QSeries(-self.valuation, rs_series_inversion(self.unit, q, self.precision), self.precision)

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return QSeries.one(self.precision)
        return QSeries(self.valuation * n, rs_pow(self.unit, n, q, self.precision), self.precision)

    def dilate(self, m):
        """Substitute q -> q^m."""
        if m < 1:
            raise ValueError(f"dilation factor must be positive, got {m}")
        unit = R({(e * m,): c for (e,), c in self.unit.items()})
        return QSeries(self.valuation * m, unit, self.precision * m)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return (
            self.valuation == other.valuation
            and self.precision == other.precision
            and self.unit == other.unit
        )

    def __hash__(self):
        return hash((self.valuation, self.precision, tuple(sorted(self.unit.items()))))

    def __str__(self):
        terms = []
        for (e,), c in sorted(self.unit.items()):
            terms.append(f"({c})*q^{e + self.valuation}")
        terms.append(f"O(q^{self.truncation})")
        return " + ".join(terms)


_euler_cache = []


def _pentagonal_eta(precision):
    """prod (1 - q^n) modulo q^precision by the pentagonal number theorem."""
    terms = {}
    k = 0
    while True:
        added = False
        for j in ((k, -k) if k else (0,)):
            g = j * (3 * j - 1) // 2
            if g < precision:
                terms[(g,)] = QQ((-1) ** k)
                added = True
        if not added:
            return R(terms)
        k += 1


def euler_product(precision):
    """prod (1 - q^n)^24 modulo q^precision, cached at the largest precision seen."""
    if _euler_cache and _euler_cache[0].precision >= precision:
        return _euler_cache[0].truncate(precision)
    logger.debug("expanding the discriminant unit to precision %d", precision)
    series = QSeries(0, rs_pow(_pentagonal_eta(precision), 24, q, precision), precision)
    _euler_cache[:] = [series]
    return series


def delta_qexp(T):
    """Delta = q prod (1 - q^n)^24 with coefficients of q^1 ... q^T."""
    if T < 1:
        raise TruncationError(f"truncation must be at least 1, got {T}")
    return QSeries(1, euler_product(T).unit, T)


def dilate_polynomial(poly, m, limit):
    """poly(q^m) modulo q^limit."""
    return R({(e * m,): c for (e,), c in poly.items() if e * m < limit})


def polynomial_product(polys, limit):
    """Product of polynomials in q modulo q^limit."""
    product = R(1)
    for poly in polys:
        product = rs_mul(product, poly, q, limit)
    return product
