"""Cusps of X0(N) for squarefree N and the divisor lattices they span.

The cusps form a torsor under W = (Z/2)^s: the bit-vector w labels the cusp
[1/m(w)] with m(w) = prod of the p_i over the set bits. Characters of W are
sign vectors e in {+1,-1}^s paired with w by <e, w> = prod e_i^{w_i}.

Divisors supported on cusps are integer vectors indexed by W in lexicographic
order of the bit-vectors (w_1 is the most significant bit).
"""

import functools
import itertools
import logging
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import galois

from .errors import DomainError, LocalizationError
from .groups import LocalizedAbelianGroup
from .smith import as_int_matrix, determinant, smith_normal_form

logger = logging.getLogger(__name__)

WElem = Tuple[int, ...]
Character = Tuple[int, ...]


def cusp_elements(s):
    """All w in W, lexicographic on bit-vectors."""
    return [tuple(bits) for bits in itertools.product((0, 1), repeat=s)]


def characters(s):
    """All e in E, lexicographic on sign strings with '+' before '-'."""
    return [tuple(signs) for signs in itertools.product((1, -1), repeat=s)]


def identity_character(s):
    """The trivial character 1_E = (+1, ..., +1)."""
    return (1,) * s


def unit_character(s, i):
    """e^(i): -1 in position i (1-based), +1 elsewhere."""
    if not 1 <= i <= s:
        raise DomainError(f"index {i} out of range 1..{s}")
    return tuple(-1 if j == i - 1 else 1 for j in range(s))


def unit_index(e):
    """Return i if e = e^(i), otherwise None."""
    minus = [j for j, sign in enumerate(e) if sign == -1]
    return minus[0] + 1 if len(minus) == 1 else None


def weight(e):
    """|e^{-1}(-1)|, the number of -1 entries."""
    return sum(1 for sign in e if sign == -1)


def format_character(e):
    """Render a character as a sign string.

    Args:
        e: a tuple of +-1 entries

    Returns:
        str: '+' for every +1 and '-' for every -1, e.g. '+-' for (1, -1)
    """
    return "".join("+" if sign == 1 else "-" for sign in e)


def parse_character(text):
    """Read a sign string such as '+-' back into a character.

    Raises:
        DomainError: if the text is empty or holds anything besides '+' and '-'
    """
    if not text or any(c not in "+-" for c in text):
        raise DomainError(f"'{text}' is not a sign string")
    return tuple(1 if c == "+" else -1 for c in text)


def format_w(w):
    """Render a bit-vector of W as a bit string, e.g. '01'."""
    return "".join(str(bit) for bit in w)


def parse_w(text):
    if not text or any(c not in "01" for c in text):
        raise DomainError(f"'{text}' is not a bit string")
    return tuple(int(c) for c in text)


def w_index(w):
    """Position of w in the lexicographic order of W."""
    index = 0
    for bit in w:
        index = 2 * index + bit
    return index


def add_w(w, v):
    if len(w) != len(v):
        raise DomainError("bit-vectors of different lengths")
    return tuple((a + b) % 2 for a, b in zip(w, v))


def all_ones(s):
    """w_infinity: the bit-vector labelling the cusp [1/N] at infinity."""
    return (1,) * s


def pairing(e, w):
    """<e, w> = product of e_i over the set bits of w."""
    if len(e) != len(w):
        raise DomainError("character and bit-vector have different lengths")
    result = 1
    for sign, bit in zip(e, w):
        if bit:
            result *= sign
    return result


def m_of_w(modulus, w):
    """The divisor m(w) of N: an int in NF, a galois polynomial in FF."""
    if len(w) != modulus.s:
        raise DomainError("bit-vector length differs from s")
    chosen = [p for p, bit in zip(modulus.primes, w) if bit]
    if modulus.setting.is_nf:
        return functools.reduce(operator.mul, (p.value for p in chosen), 1)
    one = galois.Poly.One(field=modulus.setting.field)
    return functools.reduce(operator.mul, (p.poly for p in chosen), one)


def cusp_label(modulus, w):
    """Text label [1/m] of the cusp indexed by w."""
    m = m_of_w(modulus, w)
    if modulus.setting.is_nf:
        return "[1]" if m == 1 else f"[1/{m}]"
    text = str(m).replace("x", "t").replace(" ", "")
    return "[1]" if text == "1" else f"[1/({text})]"


@dataclass(frozen=True)
class CuspDivisor:
    """An element of D = sum over w in W of Z[w]."""

    s: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if len(coeffs) != 2**self.s:
            raise DomainError(f"a cusp divisor for s={self.s} needs {2 ** self.s} coefficients")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, s):
        """The zero divisor on the 2^s cusps."""
        return cls(s, (0,) * 2**s)

    @classmethod
    def cusp(cls, s, w):
        """The divisor [w]."""
        coeffs = [0] * 2**s
        coeffs[w_index(w)] = 1
        return cls(s, tuple(coeffs))

    @classmethod
    def from_mapping(cls, s, mapping):
        coeffs = [0] * 2**s
        for w, c in mapping.items():
            coeffs[w_index(w)] += c
        return cls(s, tuple(coeffs))

    def __getitem__(self, w):
        return self.coeffs[w_index(w)]

    def items(self):
        return list(zip(cusp_elements(self.s), self.coeffs))

    @property
    def degree(self):
        return sum(self.coeffs)

    def is_zero(self):
        return not any(self.coeffs)

    def support(self):
        return [w for w, c in self.items() if c]

    def _check(self, other):
        if not isinstance(other, CuspDivisor) or other.s != self.s:
            raise DomainError("cusp divisors over different W")

    def __add__(self, other):
        self._check(other)
        return CuspDivisor(self.s, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return CuspDivisor(self.s, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return CuspDivisor(self.s, tuple(-a for a in self.coeffs))

    def __mul__(self, scalar):
        return CuspDivisor(self.s, tuple(scalar * a for a in self.coeffs))

    __rmul__ = __mul__

    def to_dict(self):
        return {
            "s": self.s,
            "coeffs": {format_w(w): c for w, c in self.items()},
        }

    @classmethod
    def from_dict(cls, data):
        mapping = {parse_w(bits): int(c) for bits, c in data["coeffs"].items()}
        return cls.from_mapping(int(data["s"]), mapping)

    def __str__(self):
        terms = []
        for w, c in self.items():
            if c:
                terms.append(f"{c:+d}[{format_w(w)}]")
        return " ".join(terms) if terms else "0"


def eigendivisor(s, e):
    """D^e = sum over w of <e, w>[w]."""
    return CuspDivisor(s, tuple(pairing(e, w) for w in cusp_elements(s)))


def D_e(modulus, e):
    """D^e for the modulus (see :func:`eigendivisor`)."""
    if len(e) != modulus.s:
        raise DomainError("character length differs from s")
    return eigendivisor(modulus.s, e)


def atkin_lehner(w, divisor):
    """W_w acting on a cusp divisor by translation [w'] -> [w + w']."""
    if len(w) != divisor.s:
        raise DomainError("bit-vector length differs from s")
    mapping = {add_w(w, v): c for v, c in divisor.items()}
    return CuspDivisor.from_mapping(divisor.s, mapping)


def sum_of_eigendivisors(s, i):
    """sum of D^e over e with e_i = -1; equals 2^{s-1}([1] - [1/p_i])."""
    total = CuspDivisor.zero(s)
    for e in characters(s):
        if e[i - 1] == -1:
            total = total + eigendivisor(s, e)
    return total


def pairing_matrix(s):
    """The 2^s x 2^s matrix (<e, w>) and its exact |det|.

    Returns:
        (matrix, |det|) with rows indexed by characters, columns by W
    """
    if s < 1:
        raise DomainError("pairing matrix needs s >= 1")
    matrix = as_int_matrix([[pairing(e, w) for w in cusp_elements(s)] for e in characters(s)])
    return matrix, abs(determinant(matrix))


def recursive_pairing_matrix(s):
    """A_s built as [[A, A], [A, -A]] from A_{s-1}, with A_0 = (1)."""
    block = [[1]]
    for _ in range(s):
        top = [row + row for row in block]
        bottom = [row + [-x for x in row] for row in block]
        block = top + bottom
    return as_int_matrix(block)


def pairing_det_closed_form(s):
    return 2 ** (2 ** (s - 1) * s)


def index_closed_form(s):
    return 2 ** ((2 ** (s - 1) - 1) * s)


def degree_zero_coordinates(divisor):
    """Coordinates of a degree-0 divisor in the Z-basis {[w] - [0] : w != 0} of D_2."""
    if divisor.degree != 0:
        raise DomainError(f"divisor has degree {divisor.degree}, expected 0")
    return list(divisor.coeffs[1:])


def d3_coordinates(divisor):
    """Coordinates in D_3 = D / <sum [w]>, normalized so the [0] slot is zero."""
    base = divisor.coeffs[0]
    return [c - base for c in divisor.coeffs[1:]]


def lattice_index_D2_D1(modulus):
    """[D_2 : D_1] by SNF of the matrix of {D^e : e != 1} in a basis of D_2."""
    s = modulus.s
    rows = [
        degree_zero_coordinates(eigendivisor(s, e))
        for e in characters(s)
        if e != identity_character(s)
    ]
    snf = smith_normal_form(rows)
    index = 1
    for d in snf.diagonal:
        index *= d
    logger.debug("[D2:D1] for s=%d is %d", s, index)
    return index


def coker_D2_to_D3(modulus):
    """The cokernel of D_2 -> D_3 as a group (order 2^s)."""
    s = modulus.s
    rows = []
    for w in cusp_elements(s)[1:]:
        rows.append(d3_coordinates(CuspDivisor.cusp(s, w) - CuspDivisor.cusp(s, (0,) * s)))
    snf = smith_normal_form(rows)
    return LocalizedAbelianGroup(snf.torsion)


@dataclass(frozen=True)
class EigenComponent:
    """The e-part of a divisor over Z[1/2]: scalar * D^e."""

    character: Character
    scalar: Fraction

    def coefficients(self):
        s = len(self.character)
        return tuple(self.scalar * pairing(self.character, w) for w in cusp_elements(s))


def e_part(divisor, e, inverted=(2,)):
    """Project a divisor onto its e-eigencomponent.

    The projector is 2^{-s} sum over w of <e, w> W_w, so the e-part is
    c * D^e with c = 2^{-s} sum over w of <e, w> a_w.

    Args:
        divisor: CuspDivisor
        e: character
        inverted: primes inverted in the coefficient ring; must contain 2

    Raises:
        LocalizationError: if 2 is not inverted
    """
    if 2 not in set(inverted):
        raise LocalizationError("e-parts need 2 to be inverted")
    if len(e) != divisor.s:
        raise DomainError("character length differs from s")
    total = sum(pairing(e, w) * c for w, c in divisor.items())
    return EigenComponent(tuple(e), Fraction(total, 2**divisor.s))


def dp2_basis(modulus):
    """The ordered basis {[1/m] - [1/(m p_i)] : i, m | N/(p_1...p_i)} of D_2.

    m | N/(p_1...p_i) means w is supported on positions after i. Ordered
    lexicographically by (i, w).

    Returns:
        list of ((i, w), divisor) with i 1-based
    """
    s = modulus.s
    basis = []
    for i in range(1, s + 1):
        for w in cusp_elements(s):
            if any(w[:i]):
                continue
            shifted = add_w(w, basis_vector(s, i))
            basis.append(((i, w), CuspDivisor.cusp(s, w) - CuspDivisor.cusp(s, shifted)))
    return basis


def basis_vector(s, i):
    """The bit-vector with a single 1 in position i (1-based)."""
    return tuple(1 if j == i - 1 else 0 for j in range(s))


def expand_in_dp2_basis(divisor):
    """Integer coordinates of a degree-0 divisor in :func:`dp2_basis`.

    A cusp u != 0 whose first set bit is i equals [w] - b_(i, w) with
    w = u - e_i, so cusps are peeled off from the most bits downwards.

    Returns:
        dict mapping (i, w) to its coefficient (zeros omitted)
    """
    if divisor.degree != 0:
        raise DomainError(f"divisor has degree {divisor.degree}, expected 0")
    s = divisor.s
    remaining = dict(divisor.items())
    coords = {}
    for u in sorted(cusp_elements(s), key=lambda v: -sum(v)):
        c = remaining[u]
        if not c or not any(u):
            continue
        i = u.index(1) + 1
        w = add_w(u, basis_vector(s, i))
        coords[(i, w)] = coords.get((i, w), 0) - c
        remaining[w] += c
        remaining[u] = 0
    return {key: c for key, c in coords.items() if c}
