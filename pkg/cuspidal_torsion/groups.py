"""Finite abelian groups in invariant-factor form, localized away from a prime set."""

from dataclasses import dataclass
from typing import FrozenSet, Tuple

from sympy import factorint, primefactors

from .smith import smith_normal_form


def strip_primes(n, primes):
    """Remove from n every prime factor lying in primes."""
    n = abs(int(n))
    for p in primes:
        while n and n % p == 0:
            n //= p
    return n


def ell_part(n, ell):
    """The largest power of ell dividing n."""
    n = abs(int(n))
    part = 1
    while n and n % ell == 0:
        n //= ell
        part *= ell
    return part


def invariant_chain(orders):
    """Merge cyclic orders into an invariant-factor chain n_1 | n_2 | ... (all > 1).

    Works through the primary decomposition: the k-th largest prime powers of
    every prime are multiplied together.
    """
    powers = {}
    for n in orders:
        for p, e in factorint(abs(int(n))).items():
            powers.setdefault(p, []).append(e)
    if not powers:
        return ()
    length = max(len(exps) for exps in powers.values())
    chain = [1] * length
    for p, exps in powers.items():
        for slot, e in enumerate(sorted(exps, reverse=True)):
            chain[length - 1 - slot] *= p**e
    return tuple(chain)


def diagonal_invariants(orders):
    """Invariant factors of the direct sum of Z/n_i by SNF of diag(n_i)."""
    orders = [int(n) for n in orders]
    if not orders:
        return ()
    matrix = [[n if i == j else 0 for j in range(len(orders))] for i, n in enumerate(orders)]
    return smith_normal_form(matrix).torsion


@dataclass(frozen=True, eq=False)
class LocalizedAbelianGroup:
    """A finite abelian group (invariant factors) tensored with Z[1/S].

    The integer factors are kept unreduced; ``reduced`` strips the S-parts.
    Equality compares reduced forms.
    """

    factors: Tuple[int, ...]
    inverted: FrozenSet[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "factors", invariant_chain(self.factors))
        object.__setattr__(self, "inverted", frozenset(int(p) for p in self.inverted))

    @classmethod
    def trivial(cls, inverted=()):
        return cls((), frozenset(inverted))

    @classmethod
    def cyclic(cls, order, inverted=()):
        return cls((order,), frozenset(inverted))

    @property
    def reduced(self):
        return invariant_chain(strip_primes(n, self.inverted) for n in self.factors)

    @property
    def order(self):
        result = 1
        for n in self.reduced:
            result *= n
        return result

    @property
    def full_order(self):
        """Order of the underlying integral group, before localization."""
        result = 1
        for n in self.factors:
            result *= n
        return result

    def is_trivial(self):
        return not self.reduced

    def localize(self, primes):
        """Invert further primes."""
        return LocalizedAbelianGroup(self.factors, self.inverted | frozenset(primes))

    def localized_at(self, ell):
        """The ell-primary part, i.e. the group tensored with Z_(ell)."""
        others = {p for n in self.factors for p in primefactors(n) if p != ell}
        return LocalizedAbelianGroup(self.factors, (self.inverted | others) - {ell})

    def direct_sum(self, other):
        if self.inverted != other.inverted:
            raise ValueError("direct sum needs equal localization sets")
        return LocalizedAbelianGroup(self.factors + other.factors, self.inverted)

    def __eq__(self, other):
        if not isinstance(other, LocalizedAbelianGroup):
            return NotImplemented
        return self.reduced == other.reduced

    def __hash__(self):
        return hash(self.reduced)

    def to_dict(self):
        return {
            "group": list(self.factors),
            "inverted": sorted(self.inverted),
            "reduced": list(self.reduced),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(tuple(data["group"]), frozenset(data["inverted"]))

    def __str__(self):
        reduced = self.reduced
        if not reduced:
            text = "trivial"
        else:
            text = " + ".join(f"Z/{n}" for n in reduced)
        if self.inverted:
            text += f" (away from {','.join(str(p) for p in sorted(self.inverted))})"
        return text
