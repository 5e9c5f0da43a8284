"""Hecke operators on cuspidal data and the Eisenstein checks.

The local-unit model L = sum over cusps of F(X)^x / U^(1) records, at every
cusp, a valuation and a leading coefficient in F^x. The operator tau_p acts
on each component by

    phi_w(alpha) = (-1)^((|p|+1) ord(alpha)) * alpha^(|p|+1)

so (tau_p - |p| - 1) sends L^0 (total valuation zero) into the part of
valuation zero, where a second application is trivial.

:class:`LElement` holds one element with :class:`~cuspidal_torsion.base_ring.Monomial`
leading coefficients. :class:`LBatch` holds many elements as integer arrays over
a fixed prime pool, with constants stored as discrete logarithms, and is what
the randomized sweeps run on.
"""

import functools
import logging
import random
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from sympy import primerange

from .base_ring import Monomial, PrimeElt, irreducible_polys, norm, parse_prime
from .cusps import (
    CuspDivisor,
    add_w,
    all_ones,
    basis_vector,
    cusp_elements,
    format_w,
    parse_w,
    w_index,
)
from .errors import DomainError

logger = logging.getLogger(__name__)


def _check_prime(modulus, p):
    if not isinstance(p, PrimeElt) or p.setting != modulus.setting:
        raise DomainError(f"{p} is not a prime of the modulus setting")
    if p in modulus.primes:
        raise DomainError(f"tau_{p} is undefined: {p} divides N")


def hecke_on_cusp_divisor(modulus, p, divisor):
    """tau_p on D: every cusp [w] goes to (|p| + 1)[w]."""
    _check_prime(modulus, p)
    return (norm(p) + 1) * divisor


@dataclass(frozen=True)
class LocalUnitClass:
    """A class in F(X)^x_[w] / U^(1): valuation and leading coefficient."""

    valuation: int
    leading: Monomial

    def __mul__(self, other):
        return LocalUnitClass(self.valuation + other.valuation, self.leading * other.leading)

    def __pow__(self, n):
        return LocalUnitClass(self.valuation * n, self.leading**n)

    def is_one(self):
        return self.valuation == 0 and self.leading.is_one()

    def __str__(self):
        return f"(ord {self.valuation}, {self.leading})"


@dataclass(frozen=True)
class LElement:
    """An element of L, one local class per cusp in lexicographic order of W."""

    modulus: object
    components: Tuple[LocalUnitClass, ...]

    def __post_init__(self):
        components = tuple(self.components)
        if len(components) != 2**self.modulus.s:
            raise DomainError("an element of L needs one component per cusp")
        object.__setattr__(self, "components", components)

    @classmethod
    def identity(cls, modulus):
        one = LocalUnitClass(0, Monomial.one(modulus.setting))
        return cls(modulus, (one,) * 2**modulus.s)

    @classmethod
    def from_valuations(cls, modulus, valuations):
        """Leading coefficients 1 and the given valuations (a mapping w -> int)."""
        one = Monomial.one(modulus.setting)
        components = [LocalUnitClass(0, one)] * 2**modulus.s
        for w, v in valuations.items():
            current = components[w_index(w)]
            components[w_index(w)] = LocalUnitClass(current.valuation + v, one)
        return cls(modulus, tuple(components))

    def __getitem__(self, w):
        return self.components[w_index(w)]

    @property
    def total_valuation(self):
        return sum(c.valuation for c in self.components)

    def is_l0(self):
        return self.total_valuation == 0

    def divisor(self):
        """The image in D: sum of ord_[w] [w]."""
        return CuspDivisor(self.modulus.s, tuple(c.valuation for c in self.components))

    def is_identity(self):
        return all(c.is_one() for c in self.components)

    def __mul__(self, other):
        return LElement(self.modulus, tuple(a * b for a, b in zip(self.components, other.components)))

    def d3_class(self):
        """Image in D_3 (x) F^x of a valuation-zero element.

        The diagonal relation is applied by dividing every leading
        coefficient by the one at w = 0.

        Raises:
            DomainError: if some valuation is nonzero
        """
        if any(c.valuation for c in self.components):
            raise DomainError("only valuation-zero elements lie in D (x) F^x")
        base = self.components[0].leading.inverse()
        return tuple(c.leading * base for c in self.components)

    def is_zero_in_d3(self):
        return all(m.is_one() for m in self.d3_class())

    def to_dict(self):
        return {
            format_w(w): {"valuation": c.valuation, "leading": c.leading.to_dict()}
            for w, c in zip(cusp_elements(self.modulus.s), self.components)
        }

    @classmethod
    def from_dict(cls, modulus, data):
        components = [None] * 2**modulus.s
        for w in cusp_elements(modulus.s):
            entry = data[format_w(w)]
            components[w_index(w)] = LocalUnitClass(
                int(entry["valuation"]), Monomial.from_dict(modulus.setting, entry["leading"])
            )
        return cls(modulus, tuple(components))

    def __str__(self):
        return ", ".join(f"[{format_w(w)}]: {c}" for w, c in zip(cusp_elements(self.modulus.s), self.components))


def phi_w(modulus, p, u):
    """tau_p on one local component (valuation and signed leading power)."""
    _check_prime(modulus, p)
    n = norm(p) + 1
    sign = Monomial(modulus.setting, modulus.setting.minus_one) ** (n * u.valuation)
    return LocalUnitClass(n * u.valuation, sign * u.leading**n)


def apply_hecke(modulus, p, x):
    """tau_p on L, componentwise."""
    return LElement(modulus, tuple(phi_w(modulus, p, c) for c in x.components))


def apply_eisenstein(modulus, p, x):
    """(tau_p - |p| - 1) x = tau_p(x) * x^(-(|p|+1)) on L^0.

    Raises:
        DomainError: if x is not in L^0
    """
    if not x.is_l0():
        raise DomainError(f"element has total valuation {x.total_valuation}, not in L^0")
    n = norm(p) + 1
    image = apply_hecke(modulus, p, x)
    return LElement(
        modulus, tuple(a * b ** (-n) for a, b in zip(image.components, x.components))
    )


class UnitGroup:
    """The constants F^x as discrete logarithms.

    NF constants are +-1, generated by -1. FF constants are GF(q)^x,
    generated by the galois primitive element. A constant u is stored as the
    exponent k with u = g^k, taken modulo the group order.
    """

    def __init__(self, setting):
        self.setting = setting
        if setting.is_nf:
            self.units = (1, -1)
        else:
            field = setting.field
            g = field.primitive_element
            self.units = tuple(int(g**k) for k in range(setting.q - 1))
        self.order = len(self.units)
        self._logs = {u: k for k, u in enumerate(self.units)}
        self.minus_one_log = self.log(setting.minus_one)

    def log(self, unit):
        try:
            return self._logs[unit]
        except KeyError:
            raise DomainError(f"{unit} is not a constant of {self.setting}") from None

    def exp(self, k):
        return self.units[int(k) % self.order]


@functools.lru_cache(maxsize=None)
def unit_group(setting):
    return UnitGroup(setting)


@dataclass(frozen=True, eq=False)
class LBatch:
    """A batch of elements of L stored as integer arrays.

    Row i, column k describes the class at the k-th cusp (lexicographic W) of
    the i-th element: its valuation, the discrete log of its constant, and the
    exponents of the pool primes in its leading coefficient.

    Attributes:
        modulus: the level
        pool: primes allowed in leading coefficients
        valuations: shape (rows, 2^s)
        unit_logs: shape (rows, 2^s), reduced modulo the unit group order
        exponents: shape (rows, 2^s, len(pool))
    """

    modulus: object
    pool: Tuple[PrimeElt, ...]
    valuations: np.ndarray
    unit_logs: np.ndarray
    exponents: np.ndarray

    def __post_init__(self):
        size = 2**self.modulus.s
        pool = tuple(self.pool)
        valuations = np.asarray(self.valuations, dtype=np.int64)
        if valuations.ndim != 2 or valuations.shape[1] != size:
            raise DomainError("a batch needs one column per cusp")
        rows = valuations.shape[0]
        order = unit_group(self.modulus.setting).order
        unit_logs = np.asarray(self.unit_logs, dtype=np.int64).reshape(rows, size) % order
        exponents = np.asarray(self.exponents, dtype=np.int64).reshape(rows, size, len(pool))
        object.__setattr__(self, "pool", pool)
        object.__setattr__(self, "valuations", valuations)
        object.__setattr__(self, "unit_logs", unit_logs)
        object.__setattr__(self, "exponents", exponents)

    @classmethod
    def from_elements(cls, modulus, elements, pool=None):
        """Pack LElements; the pool defaults to every prime that occurs, sorted.

        Raises:
            DomainError: if a leading coefficient uses a prime outside the pool
        """
        elements = list(elements)
        if pool is None:
            seen = {p for x in elements for c in x.components for p, _ in c.leading.exponents}
            pool = sorted(seen, key=PrimeElt.sort_key)
        pool = tuple(pool)
        index = {p: j for j, p in enumerate(pool)}
        group = unit_group(modulus.setting)
        size = 2**modulus.s
        valuations = np.zeros((len(elements), size), dtype=np.int64)
        unit_logs = np.zeros_like(valuations)
        exponents = np.zeros((len(elements), size, len(pool)), dtype=np.int64)
        for i, x in enumerate(elements):
            for k, c in enumerate(x.components):
                valuations[i, k] = c.valuation
                unit_logs[i, k] = group.log(c.leading.unit)
                for p, n in c.leading.exponents:
                    if p not in index:
                        raise DomainError(f"{p} is outside the prime pool")
                    exponents[i, k, index[p]] = n
        return cls(modulus, pool, valuations, unit_logs, exponents)

    def __len__(self):
        return self.valuations.shape[0]

    def _with(self, valuations, unit_logs, exponents):
        return LBatch(self.modulus, self.pool, valuations, unit_logs, exponents)

    def head(self, count):
        """The first count rows."""
        return self._with(self.valuations[:count], self.unit_logs[:count], self.exponents[:count])

    def element(self, i):
        """Row i as an :class:`LElement`."""
        group = unit_group(self.modulus.setting)
        setting = self.modulus.setting
        components = []
        for k in range(self.valuations.shape[1]):
            pairs = tuple((p, int(n)) for p, n in zip(self.pool, self.exponents[i, k]) if n)
            leading = Monomial(setting, group.exp(self.unit_logs[i, k]), pairs)
            components.append(LocalUnitClass(int(self.valuations[i, k]), leading))
        return LElement(self.modulus, tuple(components))

    def elements(self):
        return [self.element(i) for i in range(len(self))]

    def __mul__(self, other):
        if other.pool != self.pool:
            raise DomainError("batches over different prime pools")
        return self._with(
            self.valuations + other.valuations,
            self.unit_logs + other.unit_logs,
            self.exponents + other.exponents,
        )

    def __pow__(self, n):
        return self._with(n * self.valuations, n * self.unit_logs, n * self.exponents)

    @property
    def total_valuations(self):
        return self.valuations.sum(axis=1)

    def valuation_zero(self):
        """Per row: every component has valuation zero."""
        return ~self.valuations.any(axis=1)

    def is_identity(self):
        """Per row: the element is the identity of L."""
        return (
            self.valuation_zero()
            & ~self.unit_logs.any(axis=1)
            & ~self.exponents.any(axis=(1, 2))
        )

    def is_zero_in_d3(self):
        """Per row: the class in D_3 (x) F^x vanishes (all leading coefficients agree).

        Raises:
            DomainError: if some valuation is nonzero
        """
        if self.valuations.any():
            raise DomainError("only valuation-zero elements lie in D (x) F^x")
        order = unit_group(self.modulus.setting).order
        logs = (self.unit_logs - self.unit_logs[:, :1]) % order
        exponents = self.exponents - self.exponents[:, :1, :]
        return ~logs.any(axis=1) & ~exponents.any(axis=(1, 2))

    def rows_equal(self, other):
        """Per row equality with another batch over the same pool."""
        return (
            (self.valuations == other.valuations).all(axis=1)
            & (self.unit_logs == other.unit_logs).all(axis=1)
            & (self.exponents == other.exponents).all(axis=(1, 2))
        )


def hecke_batch(modulus, p, batch):
    """tau_p on every row of a batch."""
    _check_prime(modulus, p)
    n = norm(p) + 1
    group = unit_group(modulus.setting)
    return batch._with(
        n * batch.valuations,
        group.minus_one_log * n * batch.valuations + n * batch.unit_logs,
        n * batch.exponents,
    )


def eisenstein_batch(modulus, p, batch):
    """(tau_p - |p| - 1) on every row of a batch.

    Raises:
        DomainError: if some row is not in L^0
    """
    if batch.total_valuations.any():
        raise DomainError("batch has elements outside L^0")
    n = norm(p) + 1
    return hecke_batch(modulus, p, batch) * batch ** (-n)


def _draw_monomial(rng, setting, pool_size, max_exponent=3, max_primes=3):
    unit = rng.choice((1, -1)) if setting.is_nf else rng.randrange(1, setting.q)
    chosen = rng.sample(range(pool_size), min(max_primes, pool_size))
    return unit, [(j, rng.randint(-max_exponent, max_exponent)) for j in chosen]


def random_l0_batch(modulus, rng, primes, count, max_valuation=4):
    """count random elements of L^0 drawn from rng.

    Each leading coefficient is a random constant times at most three of the
    given primes to exponents in [-3, 3]; the last component balances the
    valuations.
    """
    pool = tuple(primes)
    setting = modulus.setting
    group = unit_group(setting)
    size = 2**modulus.s
    valuations, unit_logs, entries = [], [], []
    for i in range(count):
        drawn = [rng.randint(-max_valuation, max_valuation) for _ in range(size - 1)]
        drawn.append(-sum(drawn))
        valuations.append(drawn)
        logs = []
        for k in range(size):
            unit, pairs = _draw_monomial(rng, setting, len(pool))
            logs.append(group.log(unit))
            entries.extend((i, k, j, n) for j, n in pairs)
        unit_logs.append(logs)
    exponents = np.zeros((count, size, len(pool)), dtype=np.int64)
    if entries:
        rows, cols, slots, values = np.array(entries, dtype=np.int64).T
        exponents[rows, cols, slots] = values
    return LBatch(
        modulus,
        pool,
        np.array(valuations, dtype=np.int64).reshape(count, size),
        np.array(unit_logs, dtype=np.int64).reshape(count, size),
        exponents,
    )


def random_l0(modulus, rng, primes, max_valuation=4):
    """A random element of L^0 (a one-row :func:`random_l0_batch`)."""
    return random_l0_batch(modulus, rng, primes, 1, max_valuation).element(0)


def hecke_primes(modulus, bound):
    """Primes p not dividing N with |p| <= bound (NF: rational, FF: monic irreducible)."""
    setting = modulus.setting
    if setting.is_nf:
        candidates = [PrimeElt(setting, int(p)) for p in primerange(2, bound + 1)]
    else:
        candidates = []
        degree = 1
        while setting.q**degree <= bound:
            candidates.extend(irreducible_polys(setting.q, degree))
            degree += 1
    return [p for p in candidates if p not in modulus.primes]


def parse_prime_range(modulus, text):
    """Parse ``2..50`` (norm range) or ``2,3,5`` (explicit primes)."""
    text = text.strip()
    if ".." in text:
        low, high = text.split("..", 1)
        try:
            low, high = int(low), int(high)
        except ValueError as e:
            raise DomainError(f"'{text}' is not a range like 2..50") from e
        return [p for p in hecke_primes(modulus, high) if norm(p) >= low]
    primes = [parse_prime(modulus.setting, part.strip()) for part in text.split(",")]
    for p in primes:
        _check_prime(modulus, p)
    return primes


@dataclass(frozen=True)
class ObstructionResult:
    """The projected element of D_3 (x) {+-1} and its zero/nonzero verdict."""

    lift: LElement
    support: Tuple[Tuple[int, ...], ...]
    nonzero: bool

    def to_dict(self):
        return {
            "support": [format_w(w) for w in self.support],
            "nonzero": self.nonzero,
            "lift": self.lift.to_dict(),
        }

    @classmethod
    def from_dict(cls, modulus, data):
        return cls(
            LElement.from_dict(modulus, data["lift"]),
            tuple(parse_w(bits) for bits in data["support"]),
            bool(data["nonzero"]),
        )


def two_torsion_obstruction(modulus, p):
    """Apply (tau_2 - 3) to the lift of [1] - [1/p_1] - [p_1/N] + [1/N].

    The lift has leading coefficients 1 and valuations +1, -1, -1, +1 on the
    cusps w = 0, e_1, (1,...,1) - e_1, (1,...,1) (coinciding cusps add up).
    The result is sum over the odd-valuation cusps of [w] (x) (-1); it is
    zero in D_3 (x) {+-1} exactly when that support is empty or all of W.

    Raises:
        DomainError: outside NF, for even N, or for p != 2
    """
    if not modulus.setting.is_nf:
        raise DomainError("the obstruction is an NF statement")
    if any(prime.value == 2 for prime in modulus.primes):
        raise DomainError("the obstruction needs odd N")
    if not isinstance(p, PrimeElt) or p.value != 2:
        raise DomainError("the obstruction is computed for p = 2 only")
    s = modulus.s
    zero, ones, first = (0,) * s, all_ones(s), basis_vector(s, 1)
    valuations = {}
    for w, v in ((zero, 1), (first, -1), (add_w(ones, first), -1), (ones, 1)):
        valuations[w] = valuations.get(w, 0) + v
    lift = LElement.from_valuations(modulus, valuations)
    image = apply_eisenstein(modulus, p, lift)
    support = tuple(
        w for w, c in zip(cusp_elements(s), image.components) if not c.leading.is_one()
    )
    nonzero = 0 < len(support) < 2**s
    logger.info("two-torsion obstruction for N=%s: support %s", modulus, [format_w(w) for w in support])
    return ObstructionResult(lift, support, nonzero)


def d3_basis_batch(modulus, p):
    """Valuation-zero elements [w] (x) x, one row per cusp w and generator x.

    The generators are the primes of N, p itself, and the generator of the
    constants (-1 in NF, a primitive element of GF(q) in FF).
    """
    pool = modulus.primes + (p,)
    size, width = 2**modulus.s, len(pool) + 1
    valuations = np.zeros((size * width, size), dtype=np.int64)
    unit_logs = np.zeros_like(valuations)
    exponents = np.zeros((size * width, size, len(pool)), dtype=np.int64)
    for k in range(size):
        for j in range(len(pool)):
            exponents[k * width + j, k, j] = 1
        unit_logs[k * width + len(pool), k] = 1
    return LBatch(modulus, pool, valuations, unit_logs, exponents)


def divisor_action_holds(modulus, p):
    """tau_p([w]) = (|p|+1)[w] on every cusp, so tau_p - |p| - 1 kills D_3."""
    n = norm(p) + 1
    for w in cusp_elements(modulus.s):
        divisor = CuspDivisor.cusp(modulus.s, w)
        if hecke_on_cusp_divisor(modulus, p, divisor) - n * divisor != CuspDivisor.zero(modulus.s):
            return False
    return True


def d3_eisenstein_holds(modulus, p):
    """(tau_p - |p| - 1) is trivial on every valuation-zero basis element."""
    return bool(eisenstein_batch(modulus, p, d3_basis_batch(modulus, p)).is_identity().all())


def exponent_two_holds(modulus, p, samples):
    """(tau_p - |p| - 1)^2 x is the identity for every sample x in L^0.

    Args:
        samples: an :class:`LBatch` or a sequence of :class:`LElement`
    """
    batch = samples if isinstance(samples, LBatch) else LBatch.from_elements(modulus, samples)
    once = eisenstein_batch(modulus, p, batch)
    if not once.valuation_zero().all():
        return False
    return bool(eisenstein_batch(modulus, p, once).is_identity().all())


def ctilde_eisenstein_holds(modulus, p):
    """(tau_p - |p| - 1) kills the lifts of the D_2 basis [w] - [0] modulo D_3 (x) F^x."""
    size = 2**modulus.s
    valuations = np.zeros((size - 1, size), dtype=np.int64)
    valuations[:, 0] = -1
    valuations[np.arange(size - 1), np.arange(1, size)] = 1
    lifts = LBatch(
        modulus, (), valuations, np.zeros_like(valuations), np.zeros((size - 1, size, 0), dtype=np.int64)
    )
    return bool(eisenstein_batch(modulus, p, lifts).is_zero_in_d3().all())


def eisenstein_away_from_two(modulus, bound):
    """ctilde checks for the generators tau_p - p - 1 with p odd (NF ideal E')."""
    return {
        str(p): ctilde_eisenstein_holds(modulus, p)
        for p in hecke_primes(modulus, bound)
        if norm(p) % 2
    }


def commute_on(modulus, p1, p2, x):
    """tau_p1 tau_p2 x == tau_p2 tau_p1 x in the model."""
    left = apply_hecke(modulus, p1, apply_hecke(modulus, p2, x))
    right = apply_hecke(modulus, p2, apply_hecke(modulus, p1, x))
    return left == right


def commute_holds(modulus, p1, p2, batch):
    """:func:`commute_on` for every row of a batch."""
    left = hecke_batch(modulus, p1, hecke_batch(modulus, p2, batch))
    right = hecke_batch(modulus, p2, hecke_batch(modulus, p1, batch))
    return bool(left.rows_equal(right).all())


@dataclass(frozen=True)
class EisensteinRow:
    prime: str
    divisor_action: bool
    d3_eisenstein: bool
    l0_exponent_two: bool
    ctilde_eisenstein: bool
    obstruction: object = None

    @property
    def passed(self):
        return self.divisor_action and self.d3_eisenstein and self.l0_exponent_two

    def to_dict(self):
        return {
            "prime": self.prime,
            "divisor_action": self.divisor_action,
            "d3_eisenstein": self.d3_eisenstein,
            "l0_exponent_two": self.l0_exponent_two,
            "ctilde_eisenstein": self.ctilde_eisenstein,
            "obstruction": None if self.obstruction is None else self.obstruction.to_dict(),
        }

    @classmethod
    def from_dict(cls, modulus, data):
        """Rebuild a row from :meth:`to_dict` output; the modulus restores the obstruction lift."""
        verdict = data.get("obstruction")
        return cls(
            prime=data["prime"],
            divisor_action=bool(data["divisor_action"]),
            d3_eisenstein=bool(data["d3_eisenstein"]),
            l0_exponent_two=bool(data["l0_exponent_two"]),
            ctilde_eisenstein=bool(data["ctilde_eisenstein"]),
            obstruction=None if verdict is None else ObstructionResult.from_dict(modulus, verdict),
        )


def eisenstein_report(modulus, primes, samples=1000, seed=0) -> List[EisensteinRow]:
    """One row of Eisenstein checks per Hecke prime.

    The randomized L^0 set is drawn once from ``random.Random(seed)`` over the
    primes of N together with all the Hecke primes.
    """
    for p in primes:
        _check_prime(modulus, p)
    rng = random.Random(seed)
    pool = list(modulus.primes) + list(primes)
    sample_set = random_l0_batch(modulus, rng, pool, samples)
    rows = []
    for p in primes:
        logger.info("Eisenstein checks for N=%s, p=%s", modulus, p)
        verdict = None
        if (
            modulus.setting.is_nf
            and p.value == 2
            and all(prime.value != 2 for prime in modulus.primes)
        ):
            verdict = two_torsion_obstruction(modulus, p)
        rows.append(EisensteinRow(
            prime=str(p),
            divisor_action=divisor_action_holds(modulus, p),
            d3_eisenstein=d3_eisenstein_holds(modulus, p),
            l0_exponent_two=exponent_two_holds(modulus, p, sample_set),
            ctilde_eisenstein=ctilde_eisenstein_holds(modulus, p),
            obstruction=verdict,
        ))
    return rows
