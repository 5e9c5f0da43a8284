"""The connecting map delta on cuspidal classes.

delta sends J(F)_Tor to D_3 (x) F^x (x) Q/Z. On the cuspidal group it is
determined by its values on the basis {[1/m] - [1/(m p_i)]} of D_2, each of
which maps to D^{e^(i)} (x) p_i (x) -k/(2 d(e^(i))). Since mu_F (x) Q/Z
vanishes, only the exponents of the primes p_i are tracked.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Tuple

from .base_ring import Monomial
from .cusps import (
    CuspDivisor,
    add_w,
    basis_vector,
    characters,
    cusp_elements,
    degree_zero_coordinates,
    dp2_basis,
    eigendivisor,
    expand_in_dp2_basis,
    format_character,
    format_w,
    identity_character,
    pairing,
    parse_w,
    unit_character,
    unit_index,
    w_index,
)
from .errors import DomainError
from .groups import LocalizedAbelianGroup
from .smith import cokernel_invariants, sublattice_quotient
from .torsion import d_of_char, inverted_primes

logger = logging.getLogger(__name__)


def _mod_one(x):
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class DeltaImage:
    """An element of D_3 (x) F^x (x) Q/Z supported on the primes of the modulus.

    ``exponents[w_index][j]`` is the Q/Z exponent of p_{j+1} at the cusp w.
    The representative is normalized so the w = 0 row is zero (the diagonal
    relation of D_3) and every entry lies in [0, 1).
    """

    modulus: object
    exponents: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = [tuple(Fraction(x) for x in row) for row in self.exponents]
        if len(rows) != 2**self.modulus.s or any(len(row) != self.modulus.s for row in rows):
            raise DomainError("exponent table does not match the modulus")
        base = rows[0]
        normalized = tuple(tuple(_mod_one(x - b) for x, b in zip(row, base)) for row in rows)
        object.__setattr__(self, "exponents", normalized)

    @classmethod
    def zero(cls, modulus):
        s = modulus.s
        return cls(modulus, ((Fraction(0),) * s,) * 2**s)

    @classmethod
    def from_divisor(cls, modulus, divisor, i, exponent):
        """divisor (x) p_i (x) exponent."""
        rows = []
        for w, c in divisor.items():
            row = [Fraction(0)] * modulus.s
            row[i - 1] = c * Fraction(exponent)
            rows.append(tuple(row))
        return cls(modulus, tuple(rows))

    def __add__(self, other):
        if self.modulus != other.modulus:
            raise DomainError("delta images over different moduli")
        rows = tuple(
            tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(self.exponents, other.exponents)
        )
        return DeltaImage(self.modulus, rows)

    def __mul__(self, n):
        return DeltaImage(self.modulus, tuple(tuple(n * x for x in row) for row in self.exponents))

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def is_zero(self):
        return all(x == 0 for row in self.exponents for x in row)

    @property
    def order(self):
        """lcm of the exponent denominators."""
        result = 1
        for row in self.exponents:
            for x in row:
                result = lcm(result, x.denominator)
        return result

    def translate(self, v):
        """Atkin-Lehner W_v: move the entry at w to w + v."""
        rows = [None] * len(self.exponents)
        for w in cusp_elements(self.modulus.s):
            rows[w_index(add_w(w, v))] = self.exponents[w_index(w)]
        return DeltaImage(self.modulus, tuple(rows))

    def support(self):
        """List of (w, prime, exponent) for the nonzero entries."""
        items = []
        for w in cusp_elements(self.modulus.s):
            for j, x in enumerate(self.exponents[w_index(w)]):
                if x:
                    items.append((w, self.modulus.primes[j], x))
        return items

    def to_dict(self):
        return {
            "order": self.order,
            "support": [[format_w(w), str(p), str(x)] for w, p, x in self.support()],
        }

    @classmethod
    def from_dict(cls, modulus, data):
        """Rebuild an image from :meth:`to_dict` output.

        Raises:
            DomainError: for a prime outside the modulus or a stale order
        """
        columns = {str(p): j for j, p in enumerate(modulus.primes)}
        rows = [[Fraction(0)] * modulus.s for _ in range(2**modulus.s)]
        for bits, prime, exponent in data["support"]:
            if prime not in columns:
                raise DomainError(f"{prime} does not divide {modulus}")
            rows[w_index(parse_w(bits))][columns[prime]] = Fraction(exponent)
        image = cls(modulus, tuple(tuple(row) for row in rows))
        if image.order != data["order"]:
            raise DomainError(f"recorded order {data['order']} differs from {image.order}")
        return image

    def __str__(self):
        terms = [f"[{format_w(w)}] (x) {p} (x) {x}" for w, p, x in self.support()]
        return " + ".join(terms) if terms else "0"


def _require_nontrivial(modulus, e):
    if len(e) != modulus.s:
        raise DomainError("character length differs from s")
    if tuple(e) == identity_character(modulus.s):
        raise DomainError("the trivial character is excluded")


def c_constant(modulus, e, w):
    """c(e, w): p_i^(-2^(s-1) k) if e = e^(i) and w_i = 1, else 1."""
    _require_nontrivial(modulus, e)
    i = unit_index(e)
    if i is None or not w[i - 1]:
        return Monomial.one(modulus.setting)
    exponent = -(2 ** (modulus.s - 1)) * modulus.constants.k
    return Monomial.prime_power(modulus.primes[i - 1], exponent)


def transformation_constant(modulus, e, w):
    """prod over w' of gcd(m(w'), m(w))^(-<e, w'> k), evaluated prime by prime.

    The exponent of p_j is -k * w_j * sum_{w'_j = 1} <e, w'>, which is nonzero
    only for e = e^(j) and w_j = 1. It agrees with :func:`c_constant` up to
    the sign convention of the exponent.
    """
    _require_nontrivial(modulus, e)
    k = modulus.constants.k
    pairs = []
    for j, p in enumerate(modulus.primes):
        if not w[j]:
            continue
        total = sum(pairing(e, v) for v in cusp_elements(modulus.s) if v[j])
        pairs.append((p, -k * total))
    return Monomial(modulus.setting, 1, tuple(pairs))


def delta_order_De(modulus, e):
    """Order of delta([D^e]): d/gcd(d, 2^(s-1) k) for e = e^(i), else 1."""
    _require_nontrivial(modulus, e)
    if unit_index(e) is None:
        return 1
    d = d_of_char(modulus, e)
    return d // gcd(d, 2 ** (modulus.s - 1) * modulus.constants.k)


def delta_image_De(modulus, i):
    """delta(D^{e^(i)}) = sum over w_i = 0 of [w] (x) p_i (x) -2^(s-1) k / d(e^(i))."""
    s = modulus.s
    e = unit_character(s, i)
    support = CuspDivisor.from_mapping(s, {w: 1 for w in cusp_elements(s) if not w[i - 1]})
    exponent = Fraction(-(2 ** (s - 1)) * modulus.constants.k, d_of_char(modulus, e))
    return DeltaImage.from_divisor(modulus, support, i, exponent)


def delta_image_of_char(modulus, e):
    """delta(D^e): :func:`delta_image_De` for e = e^(i), zero otherwise."""
    _require_nontrivial(modulus, e)
    i = unit_index(e)
    if i is None:
        return DeltaImage.zero(modulus)
    return delta_image_De(modulus, i)


def _basis_image(modulus, i):
    s = modulus.s
    e = unit_character(s, i)
    exponent = Fraction(-modulus.constants.k, 2 * d_of_char(modulus, e))
    return DeltaImage.from_divisor(modulus, eigendivisor(s, e), i, exponent)


def basis_order(modulus, i):
    """d(e^(i)) / gcd(d(e^(i)), k)."""
    d = d_of_char(modulus, unit_character(modulus.s, i))
    return d // gcd(d, modulus.constants.k)


def delta_basis_element(modulus, i, w):
    """delta([1/m] - [1/(m p_i)]) with m = m(w), together with its order.

    The value is D^{e^(i)} (x) p_i (x) -k/(2 d(e^(i))) whatever m is.

    Args:
        modulus: the level
        i: 1-based prime index
        w: bit-vector of m; m must divide N/p_i, i.e. w_i = 0

    Raises:
        DomainError: if m does not divide N/p_i
    """
    if not 1 <= i <= modulus.s:
        raise DomainError(f"index {i} out of range 1..{modulus.s}")
    if len(w) != modulus.s or w[i - 1]:
        raise DomainError(f"m = m({format_w(w)}) does not divide N/p_{i}")
    image = _basis_image(modulus, i)
    return image, image.order


def delta_of(modulus, divisor):
    """delta of a degree-zero cuspidal divisor, by linearity over the D_2 basis."""
    if divisor.degree != 0:
        raise DomainError(f"delta needs a degree-zero divisor, got degree {divisor.degree}")
    result = DeltaImage.zero(modulus)
    totals = {}
    for (i, _), c in expand_in_dp2_basis(divisor).items():
        totals[i] = totals.get(i, 0) + c
    for i, c in sorted(totals.items()):
        result = result + c * _basis_image(modulus, i)
    return result


def _origin(s):
    return (0,) * s


def kernel_generators(modulus):
    """Generators of the cuspidal classes killed by delta.

    First family: [1] - [1/p_i] - [1/m] + [1/(m p_i)] for m | N/(p_1...p_i),
    dropping the m = 1 entries (identically zero). Second family:
    basis_order(i) * ([1] - [1/p_i]).
    """
    s = modulus.s
    zero = CuspDivisor.cusp(s, _origin(s))
    generators = []
    for (i, w), b in dp2_basis(modulus):
        if any(w):
            generators.append(zero - CuspDivisor.cusp(s, basis_vector(s, i)) - b)
    for i in range(1, s + 1):
        generators.append(basis_order(modulus, i) * (zero - CuspDivisor.cusp(s, basis_vector(s, i))))
    return generators


def principal_generators(modulus):
    """d(e) D^e for e != 1_E: the divisors of the modular units Delta^e."""
    s = modulus.s
    return [
        d_of_char(modulus, e) * eigendivisor(s, e)
        for e in characters(s)
        if e != identity_character(s)
    ]


def kernel_subgroup(modulus, extra_inverted=()):
    """(C cap ker delta) as the quotient K/P, localized away from a.

    K is spanned by :func:`kernel_generators` and the principal lattice P.
    """
    rank = 2**modulus.s - 1
    principal = [degree_zero_coordinates(D) for D in principal_generators(modulus)]
    kernel = [degree_zero_coordinates(D) for D in kernel_generators(modulus)] + principal
    torsion = sublattice_quotient(kernel, principal, rank)
    group = LocalizedAbelianGroup(torsion, inverted_primes(modulus, extra_inverted))
    logger.debug("C cap ker delta for %s: %s", modulus, group)
    return group


def delta_cokernel(modulus):
    """D_2 modulo the kernel generators: the image of delta on C, over Z."""
    rank = 2**modulus.s - 1
    relations = [degree_zero_coordinates(D) for D in kernel_generators(modulus)]
    relations += [degree_zero_coordinates(D) for D in principal_generators(modulus)]
    torsion, free = cokernel_invariants(relations, rank)
    if free:
        raise DomainError("kernel generators do not have finite index in D_2")
    return LocalizedAbelianGroup(torsion)


def delta_summary(modulus, extra_inverted=()):
    """Per-character orders, images and kernel data for the ``delta`` subcommand.

    Only the kernel subgroup is localized; ``extra_inverted`` joins the primes
    of a there. The cokernel stays over Z.
    """
    s = modulus.s
    rows = []
    for e in characters(s):
        if e == identity_character(s):
            continue
        image = delta_image_of_char(modulus, e)
        rows.append({
            "character": format_character(e),
            "order": delta_order_De(modulus, e),
            "image": image.to_dict(),
        })
    return {
        "modulus": str(modulus),
        "orders": rows,
        "basis_orders": {str(i): basis_order(modulus, i) for i in range(1, s + 1)},
        "c_constants": {
            format_character(unit_character(s, i)): str(
                c_constant(modulus, unit_character(s, i), (1,) * s)
            )
            for i in range(1, s + 1)
        },
        "kernel_generators": [str(D) for D in kernel_generators(modulus)],
        "kernel_subgroup": kernel_subgroup(modulus, extra_inverted).to_dict(),
        "delta_cokernel": delta_cokernel(modulus).to_dict(),
    }
