"""Arithmetic settings shared by every computation.

Two settings are supported:

- NF: F = Q and A = Z. Primes are rational primes.
- FF: F = F_q(t) and A = F_q[t]. Primes are monic irreducible polynomials,
  stored as dense coefficient tuples (highest degree first) over GF(q).

A :class:`Modulus` bundles a setting with the ordered list of distinct primes
p_1, ..., p_s whose product is the squarefree level N.
"""

import functools
import logging
import operator
import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

import galois
from sympy import factorint, isprime, legendre_symbol

from .errors import DomainError, UndefinedCharacterError

logger = logging.getLogger(__name__)

Coefficients = Tuple[int, ...]


class Case(Enum):
    """The two arithmetic settings."""

    NF = "nf"
    FF = "ff"


@functools.lru_cache(maxsize=None)
def finite_field(q):
    """Return the galois field class GF(q), built once per order."""
    return galois.GF(q)


def is_prime_power(q):
    """Check whether q is a prime power p^r with r >= 1."""
    return q >= 2 and len(factorint(q)) == 1


@dataclass(frozen=True)
class Setting:
    """Arithmetic setting: NF, or FF together with the field size q."""

    case: Case
    q: Optional[int] = None

    def __post_init__(self):
        if self.case is Case.NF and self.q is not None:
            raise DomainError("the NF setting takes no field size")
        if self.case is Case.FF and (self.q is None or not is_prime_power(self.q)):
            raise DomainError(f"q must be a prime power, got {self.q}")

    @classmethod
    def nf(cls):
        """The number-field setting over Q."""
        return cls(Case.NF)

    @classmethod
    def ff(cls, q):
        """The function-field setting over GF(q)[T].

        Raises:
            DomainError: if q is not a prime power
        """
        return cls(Case.FF, q)

    @property
    def is_nf(self):
        return self.case is Case.NF

    @property
    def field(self):
        """GF(q) for the FF setting."""
        if self.is_nf:
            raise DomainError("the NF setting has no finite constant field")
        return finite_field(self.q)

    @property
    def minus_one(self):
        """The constant -1 in the representation used by :meth:`unit_mul`."""
        if self.is_nf:
            return -1
        return int(-self.field(1))

    def unit_mul(self, a, b):
        """Multiply two constants (NF: +-1, FF: nonzero elements of GF(q) as ints)."""
        if self.is_nf:
            return a * b
        gf = self.field
        return int(gf(a) * gf(b))

    def unit_pow(self, a, n):
        """Raise a constant to an integer power, negative powers included."""
        if self.is_nf:
            return a ** (n % 2) if a in (1, -1) else a**n
        gf = self.field
        if n < 0:
            return int((gf(1) / gf(a)) ** (-n))
        return int(gf(a) ** n)

    def __str__(self):
        return "NF" if self.is_nf else f"FF(q={self.q})"


@dataclass(frozen=True)
class Constants:
    """The constants k (weight of the discriminant), b and a."""

    k: int
    b: int
    a: int


def constants(setting):
    """Return (k, b, a) for the given setting.

    Args:
        setting: NF or FF setting

    Returns:
        Constants with NF -> (12, 3, 6) and FF -> (q^2-1, q+1, q(q^2-1))
    """
    if setting.is_nf:
        return Constants(k=12, b=3, a=6)
    q = setting.q
    return Constants(k=q * q - 1, b=q + 1, a=q * (q * q - 1))


def _poly(setting, coeffs):
    return galois.Poly(list(coeffs), field=setting.field)


def is_irreducible(q, poly):
    """Decide irreducibility of a monic polynomial over GF(q).

    Args:
        q: field size (prime power)
        poly: coefficients, highest degree first

    Returns:
        True iff poly has no monic factor of degree in [1, deg/2]

    Raises:
        DomainError: if poly is not monic or has degree < 1
    """
    coeffs = tuple(int(c) for c in poly)
    if len(coeffs) < 2:
        raise DomainError("irreducibility needs a polynomial of degree >= 1")
    if coeffs[0] != 1:
        raise DomainError(f"polynomial {coeffs} is not monic")
    return bool(_poly(Setting.ff(q), coeffs).is_irreducible())


def format_polynomial(coeffs, var="t"):
    """Render coefficients (highest degree first) as text such as ``t^3+t+1``."""
    degree = len(coeffs) - 1
    terms = []
    for offset, c in enumerate(coeffs):
        if c == 0:
            continue
        power = degree - offset
        if power == 0:
            terms.append(str(c))
            continue
        monomial = var if power == 1 else f"{var}^{power}"
        terms.append(monomial if c == 1 else f"{c}{monomial}")
    return "+".join(terms) if terms else "0"


@dataclass(frozen=True)
class PrimeElt:
    """A prime of A: a rational prime (NF) or a monic irreducible polynomial (FF)."""

    setting: Setting
    value: Union[int, Coefficients]

    def __post_init__(self):
        if self.setting.is_nf:
            if not isinstance(self.value, int) or not isprime(self.value):
                raise DomainError(f"{self.value} is not a rational prime")
            return
        coeffs = tuple(int(c) for c in self.value)
        if any(c < 0 or c >= self.setting.q for c in coeffs):
            raise DomainError(f"coefficients of {coeffs} are not in GF({self.setting.q})")
        object.__setattr__(self, "value", coeffs)
        if not is_irreducible(self.setting.q, coeffs):
            raise DomainError(
                f"{format_polynomial(coeffs)} is reducible over GF({self.setting.q})"
            )

    @property
    def degree(self):
        """Degree of p as a polynomial over GF(q); 1 for a rational prime."""
        return 1 if self.setting.is_nf else len(self.value) - 1

    @property
    def poly(self):
        """The galois polynomial (FF only)."""
        return _poly(self.setting, self.value)

    @property
    def norm(self):
        return norm(self)

    def sort_key(self):
        if self.setting.is_nf:
            return (self.value,)
        return (self.degree, self.value)

    def __str__(self):
        if self.setting.is_nf:
            return str(self.value)
        return format_polynomial(self.value)


def norm(p):
    """Return |p|: p itself in NF, q^deg(p) in FF."""
    if p.setting.is_nf:
        return p.value
    return p.setting.q ** p.degree


@dataclass(frozen=True)
class Modulus:
    """A squarefree level N = p_1 ... p_s given by its ordered prime factors."""

    setting: Setting
    primes: Tuple[PrimeElt, ...]

    def __post_init__(self):
        primes = tuple(self.primes)
        object.__setattr__(self, "primes", primes)
        if not primes:
            raise DomainError("a modulus needs at least one prime (s >= 1)")
        if any(p.setting != self.setting for p in primes):
            raise DomainError("all primes must live in the modulus setting")
        if len(set(primes)) != len(primes):
            raise DomainError("the primes of a modulus must be pairwise distinct")

    @classmethod
    def nf(cls, *primes):
        setting = Setting.nf()
        return cls(setting, tuple(PrimeElt(setting, int(p)) for p in primes))

    @classmethod
    def ff(cls, q, *polys):
        setting = Setting.ff(q)
        return cls(setting, tuple(PrimeElt(setting, parse_polynomial(setting, p)) for p in polys))

    @property
    def s(self):
        return len(self.primes)

    @property
    def norms(self):
        return tuple(norm(p) for p in self.primes)

    @property
    def level_norm(self):
        """|N| = product of the prime norms."""
        return functools.reduce(operator.mul, self.norms, 1)

    @property
    def level(self):
        """N itself: an integer in NF, a galois polynomial in FF."""
        if self.setting.is_nf:
            return self.level_norm
        return functools.reduce(operator.mul, (p.poly for p in self.primes))

    @property
    def constants(self):
        return constants(self.setting)

    def __str__(self):
        if self.setting.is_nf:
            return "*".join(str(p) for p in self.primes)
        parts = [str(p) if len(self.primes) == 1 else f"({p})" for p in self.primes]
        return f"{''.join(parts)} over GF({self.setting.q})"


def hecke_eligible_prime(modulus, p):
    """True iff p does not divide N, i.e. p is not one of the p_i."""
    return p not in modulus.primes


def e_H(modulus):
    """Return the character e_H.

    NF: the Legendre symbols (p_i/3); FF: the parities (-1)^deg(p_i).

    Raises:
        UndefinedCharacterError: in NF when 3 divides N
    """
    if modulus.setting.is_nf:
        if any(p.value == 3 for p in modulus.primes):
            raise UndefinedCharacterError("e_H undefined: 3 divides N")
        return tuple(int(legendre_symbol(p.value % 3, 3)) for p in modulus.primes)
    return tuple(-1 if p.degree % 2 else 1 for p in modulus.primes)


@functools.lru_cache(maxsize=None)
def _irreducible_polys(q, degree):
    setting = Setting.ff(q)
    return tuple(
        PrimeElt(setting, tuple(int(c) for c in poly.coeffs))
        for poly in galois.irreducible_polys(q, degree)
    )


def irreducible_polys(q, degree):
    """List the monic irreducible polynomials of the given degree over GF(q).

    Args:
        q: field size (prime power)
        degree: degree >= 1

    Returns:
        list of PrimeElt in the order galois enumerates them
    """
    return list(_irreducible_polys(q, degree))


_TERM = re.compile(r"^(\d*)(?:(t)(?:\^(\d+))?)?$")


def parse_polynomial(setting, text):
    """Parse ``t^3+t+1`` style text into coefficients over GF(q).

    Coefficients are integers in the galois integer representation of GF(q);
    a leading ``-`` negates in the field.

    Args:
        setting: FF setting
        text: polynomial text in the variable t

    Returns:
        Coefficient tuple, highest degree first, without leading zeros
    """
    gf = setting.field
    cleaned = text.lower().replace(" ", "").replace("*", "")
    if not cleaned:
        raise DomainError("empty polynomial")
    by_degree = {}
    for token in re.findall(r"[+-]?[^+-]+", cleaned):
        sign = -1 if token.startswith("-") else 1
        match = _TERM.match(token.lstrip("+-"))
        if not match or not (match.group(1) or match.group(2)):
            raise DomainError(f"cannot parse polynomial term '{token}' in '{text}'")
        digits, var, power = match.groups()
        coeff = int(digits) if digits else 1
        if coeff >= setting.q:
            raise DomainError(f"coefficient {coeff} is not an element of GF({setting.q})")
        degree = (int(power) if power else 1) if var else 0
        value = gf(coeff) if sign > 0 else -gf(coeff)
        by_degree[degree] = by_degree.get(degree, gf(0)) + value
    top = max(by_degree)
    coeffs = [int(by_degree.get(d, gf(0))) for d in range(top, -1, -1)]
    while len(coeffs) > 1 and coeffs[0] == 0:
        coeffs.pop(0)
    return tuple(coeffs)


def _split_product(text):
    """Split ``t(t+1)``, ``(t)*(t^2+1)`` or ``(t+1)^2`` into factor strings."""
    spaced = re.sub(r"\)\s*\(", ")*(", text.replace(" ", ""))
    spaced = re.sub(r"([0-9t])\(", r"\1*(", spaced)
    spaced = re.sub(r"\)([0-9t])", r")*\1", spaced)
    factors, depth, current = [], 0, ""
    for char in spaced:
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
        if char == "*" and depth == 0:
            factors.append(current)
            current = ""
        else:
            current += char
    factors.append(current)
    expanded = []
    for factor in factors:
        match = re.match(r"^\((.*)\)(?:\^(\d+))?$", factor)
        if match:
            expanded.extend([match.group(1)] * int(match.group(2) or 1))
        else:
            expanded.append(factor)
    return [f for f in expanded if f]


def parse_prime(setting, text):
    """Parse one prime element from its text form."""
    if setting.is_nf:
        try:
            return PrimeElt(setting, int(text))
        except ValueError as e:
            raise DomainError(f"'{text}' is not an integer") from e
    return PrimeElt(setting, parse_polynomial(setting, text))


def parse_level(setting, text):
    """Parse a level into a Modulus.

    Accepted forms: a comma separated prime list ``p1,p2,...`` (order kept),
    a composite NF integer (factored, ascending order) or an FF product such as
    ``t(t^2+1)`` (factored with galois, ordered by degree then coefficients).

    Raises:
        DomainError: if the level is not squarefree or a factor is invalid
    """
    text = text.strip().lower()
    if "," in text:
        primes = tuple(parse_prime(setting, part.strip()) for part in text.split(","))
        return Modulus(setting, primes)

    if setting.is_nf:
        try:
            n = int(text)
        except ValueError as e:
            raise DomainError(f"'{text}' is not an integer level") from e
        if n < 2:
            raise DomainError(f"level {n} has no prime factor")
        factorization = factorint(n)
        if any(mult > 1 for mult in factorization.values()):
            raise DomainError(f"level {n} is not squarefree")
        logger.debug("factored NF level %d as %s", n, sorted(factorization))
        return Modulus(setting, tuple(PrimeElt(setting, p) for p in sorted(factorization)))

    gf = setting.field
    polys = [galois.Poly(list(parse_polynomial(setting, f)), field=gf) for f in _split_product(text)]
    product = functools.reduce(operator.mul, polys)
    if product.degree < 1:
        raise DomainError(f"level '{text}' has no prime factor")
    if int(product.coeffs[0]) != 1:
        raise DomainError(f"level '{text}' is not monic")
    factors, multiplicities = product.factors()
    if any(mult > 1 for mult in multiplicities):
        raise DomainError(f"level '{text}' is not squarefree")
    primes = sorted(
        (PrimeElt(setting, tuple(int(c) for c in f.coeffs)) for f in factors),
        key=PrimeElt.sort_key,
    )
    return Modulus(setting, tuple(primes))


@dataclass(frozen=True)
class Monomial:
    """An element unit * prod p^n of F^x over a finite prime set.

    The unit is +-1 in NF and a nonzero element of GF(q) (integer
    representation) in FF. Exponents are kept as sorted (prime, exponent)
    pairs with zero exponents dropped, so equality is structural.
    """

    setting: Setting
    unit: int = 1
    exponents: Tuple[Tuple[PrimeElt, int], ...] = ()

    def __post_init__(self):
        if self.setting.is_nf and self.unit not in (1, -1):
            raise DomainError(f"NF units are +-1, got {self.unit}")
        if not self.setting.is_nf and not 0 < self.unit < self.setting.q:
            raise DomainError(f"{self.unit} is not a nonzero element of GF({self.setting.q})")
        merged = {}
        for p, n in self.exponents:
            merged[p] = merged.get(p, 0) + int(n)
        pairs = tuple(
            sorted(((p, n) for p, n in merged.items() if n), key=lambda pair: pair[0].sort_key())
        )
        object.__setattr__(self, "exponents", pairs)

    @classmethod
    def one(cls, setting):
        return cls(setting)

    @classmethod
    def prime_power(cls, p, n):
        return cls(p.setting, 1, ((p, n),))

    def exponent(self, p):
        return dict(self.exponents).get(p, 0)

    def is_one(self):
        return self.unit == 1 and not self.exponents

    def __mul__(self, other):
        if self.setting != other.setting:
            raise DomainError("monomials from different settings")
        return Monomial(
            self.setting,
            self.setting.unit_mul(self.unit, other.unit),
            self.exponents + other.exponents,
        )

    def __pow__(self, n):
        return Monomial(
            self.setting,
            self.setting.unit_pow(self.unit, n),
            tuple((p, e * n) for p, e in self.exponents),
        )

    def inverse(self):
        return self ** -1

    def __str__(self):
        parts = [f"{p}^{n}" if p.setting.is_nf else f"({p})^{n}" for p, n in self.exponents]
        if self.unit != 1 or not parts:
            parts.insert(0, str(self.unit))
        return "*".join(parts)

    def to_dict(self):
        return {"unit": self.unit, "exponents": [[str(p), n] for p, n in self.exponents]}

    @classmethod
    def from_dict(cls, setting, data):
        return cls(
            setting,
            int(data["unit"]),
            tuple((parse_prime(setting, text), int(n)) for text, n in data["exponents"]),
        )
