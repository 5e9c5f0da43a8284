"""Closed-form rational torsion of J and of the generalized Jacobian J~.

Away from the primes of a, J(F)_Tor is M_1 and J~(F)_Tor is M_2 where

    M_j = sum over characters e with at least j entries -1 of Z/d(e)

and d(e) = prod (|p_i| + e_i). The module also carries the prime-level
order, the ell-primary parts of the cuspidal group and the per-character
table of e-parts.
"""

import functools
import logging
import operator
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Tuple

from sympy import isprime, primefactors

from .base_ring import e_H
from .cusps import characters, format_character, identity_character, parse_character, unit_index, weight
from .errors import DomainError, ExcludedCaseError
from .groups import LocalizedAbelianGroup, ell_part

logger = logging.getLogger(__name__)


def d_of_char(modulus, e):
    """d(e) = prod over i of (|p_i| + e_i)."""
    if len(e) != modulus.s:
        raise DomainError("character length differs from s")
    return functools.reduce(operator.mul, (n + sign for n, sign in zip(modulus.norms, e)), 1)


def d_of_char_from_primes(modulus, e):
    """d(e) recomputed from the prime elements (q^deg in FF) rather than cached norms."""
    total = 1
    for p, sign in zip(modulus.primes, e):
        size = p.value if modulus.setting.is_nf else modulus.setting.q ** p.degree
        total *= size + sign
    return total


def a_primes(modulus):
    """Prime divisors of the constant a (NF: {2, 3}; FF: primes of q(q^2-1))."""
    return frozenset(primefactors(modulus.constants.a))


def inverted_primes(modulus, extra=()):
    """The localization set: primes of a plus any extra primes."""
    for p in extra:
        if not isprime(int(p)):
            raise DomainError(f"--invert expects primes, got {p}")
    return a_primes(modulus) | frozenset(int(p) for p in extra)


def characters_of_weight_at_least(s, j):
    return [e for e in characters(s) if weight(e) >= j]


def M_j(modulus, j):
    """M_j over Z in invariant-factor form."""
    if j not in (0, 1, 2):
        raise DomainError(f"j must be 0, 1 or 2, got {j}")
    orders = [d_of_char(modulus, e) for e in characters_of_weight_at_least(modulus.s, j)]
    return LocalizedAbelianGroup(tuple(orders))


def jacobian_torsion(modulus, extra_inverted=()):
    """J(F)_Tor tensor Z[1/a], i.e. M_1 localized away from a."""
    group = LocalizedAbelianGroup(M_j(modulus, 1).factors, inverted_primes(modulus, extra_inverted))
    logger.debug("J(F)_Tor for %s: %s", modulus, group)
    return group


def gen_jacobian_torsion(modulus, extra_inverted=()):
    """J~(F)_Tor tensor Z[1/a], i.e. M_2 localized away from a."""
    return LocalizedAbelianGroup(M_j(modulus, 2).factors, inverted_primes(modulus, extra_inverted))


def mu_torsion_rank(modulus):
    """Number of copies of mu_F in the kernel of J~ -> J on torsion: 2^s - 1."""
    return 2**modulus.s - 1


def mu_torsion(modulus, extra_inverted=()):
    """(mu_F)^(2^s - 1) localized away from a; mu_Q = {+-1}, mu_F = F_q^x."""
    order = 2 if modulus.setting.is_nf else modulus.setting.q - 1
    return LocalizedAbelianGroup(
        (order,) * mu_torsion_rank(modulus), inverted_primes(modulus, extra_inverted)
    )


def prime_level_torsion_order(modulus):
    """(|N| - 1) / gcd(k, |N| - 1), the full order of J(F)_Tor for prime N.

    Raises:
        DomainError: if N is not prime (s != 1)
    """
    if modulus.s != 1:
        raise DomainError(f"prime level needs s = 1, got s = {modulus.s}")
    n = modulus.level_norm - 1
    return n // gcd(modulus.constants.k, n)


def stated_ff_prime_order(modulus):
    """The FF prime-level value q^d / gcd(q^2-1, q^d-1) as quoted in the literature survey.

    It disagrees with :func:`prime_level_torsion_order` (already for q = 2,
    d = 1) and is only reported next to it as a flagged comparison.
    """
    if modulus.setting.is_nf or modulus.s != 1:
        raise DomainError("the quoted formula concerns FF prime levels")
    size = modulus.level_norm
    return Fraction(size, gcd(modulus.constants.k, size - 1))


def _check_ell(modulus, ell):
    if ell % 2 == 0 or not isprime(ell):
        raise ExcludedCaseError(f"ell must be an odd prime, got {ell}")
    if modulus.setting.is_nf:
        if ell == 3 and any(p.value == 3 for p in modulus.primes):
            raise ExcludedCaseError("ell = 3 needs N coprime to 3")
    else:
        q = modulus.setting.q
        if gcd(ell, q * (q - 1)) != 1:
            raise ExcludedCaseError(f"ell = {ell} divides q(q-1) = {q * (q - 1)}")


def cuspidal_ell_part(modulus, ell, e):
    """Order of the e-part of the ell-primary cuspidal group.

    The ell-part of 1 for e = 1_E, of d(e) for e = e_H != 1_E and of
    d(e)/b otherwise.

    Raises:
        ExcludedCaseError: for ell even, NF ell = 3 with 3 | N, or FF ell | q(q-1)
    """
    _check_ell(modulus, ell)
    if tuple(e) == identity_character(modulus.s):
        return 1
    d = d_of_char(modulus, e)
    b = modulus.constants.b
    if b % ell:
        # dividing by b does not change the ell-part
        return ell_part(d, ell)
    if tuple(e) == e_H(modulus):
        return ell_part(d, ell)
    return ell_part(d, ell) // ell_part(b, ell)


def cuspidal_ell_table(modulus, ell):
    """Map every character to its :func:`cuspidal_ell_part`."""
    return {e: cuspidal_ell_part(modulus, ell, e) for e in characters(modulus.s)}


def m2_prime_characters(modulus):
    """Characters outside {1_E, e_H, e^(1), ..., e^(s)}."""
    excluded = {identity_character(modulus.s), e_H(modulus)}
    return [e for e in characters(modulus.s) if e not in excluded and unit_index(e) is None]


def gen_jacobian_ell_part(modulus, ell):
    """ell-part of M_2' = sum of Z/(d(e)/b) over :func:`m2_prime_characters`.

    Raises:
        ExcludedCaseError: NF unless ell = 3 and 3 does not divide N;
            FF unless ell is odd and divides q + 1
    """
    if modulus.setting.is_nf:
        if ell != 3 or any(p.value == 3 for p in modulus.primes):
            raise ExcludedCaseError("NF needs ell = 3 and N coprime to 3")
    elif ell % 2 == 0 or not isprime(ell) or (modulus.setting.q + 1) % ell:
        raise ExcludedCaseError(f"FF needs an odd prime ell dividing q + 1, got {ell}")
    b = modulus.constants.b
    orders = []
    for e in m2_prime_characters(modulus):
        d = d_of_char(modulus, e)
        if d % b:
            raise ExcludedCaseError(f"b = {b} does not divide d({format_character(e)}) = {d}")
        orders.append(d // b)
    return LocalizedAbelianGroup(tuple(orders)).localized_at(ell)


def e_h_divisibility_holds(modulus):
    """Check the divisibility pattern of d(e) around e_H.

    NF (3 not dividing N): 3 | d(e) exactly when e != e_H.
    FF: (q+1) | d(e) for e != e_H, and gcd(q+1, d(e_H)) is a power of two.
    """
    e_h = e_H(modulus)
    b = modulus.constants.b
    for e in characters(modulus.s):
        d = d_of_char(modulus, e)
        if modulus.setting.is_nf:
            if (d % b == 0) == (e == e_h):
                return False
        elif e != e_h and d % b:
            return False
    if not modulus.setting.is_nf:
        common = gcd(b, d_of_char(modulus, e_h))
        if common & (common - 1):
            return False
    return True


@dataclass(frozen=True)
class EPartTable:
    """Per-character pair (M^e, M~^e) localized away from a."""

    entries: Dict[Tuple[int, ...], Tuple[LocalizedAbelianGroup, LocalizedAbelianGroup]]

    def __getitem__(self, e):
        return self.entries[tuple(e)]

    def total_gen_jacobian(self):
        """Direct sum of the M~^e entries."""
        groups = [tilde for _, tilde in self.entries.values()]
        return functools.reduce(LocalizedAbelianGroup.direct_sum, groups)

    def to_dict(self):
        return {
            format_character(e): {"M": m.to_dict(), "M_tilde": tilde.to_dict()}
            for e, (m, tilde) in self.entries.items()
        }

    @classmethod
    def from_dict(cls, data):
        return cls({
            parse_character(text): (
                LocalizedAbelianGroup.from_dict(entry["M"]),
                LocalizedAbelianGroup.from_dict(entry["M_tilde"]),
            )
            for text, entry in data.items()
        })


def epart_table(modulus, extra_inverted=()):
    """The e-parts of J(F)_Tor and J~(F)_Tor away from a.

    Weight 0: both trivial. Weight 1: (Z/d(e), 0). Weight >= 2: (Z/d(e), Z/d(e)).
    """
    inverted = inverted_primes(modulus, extra_inverted)
    trivial = LocalizedAbelianGroup.trivial(inverted)
    entries = {}
    for e in characters(modulus.s):
        if weight(e) == 0:
            entries[e] = (trivial, trivial)
            continue
        cyclic = LocalizedAbelianGroup.cyclic(d_of_char(modulus, e), inverted)
        entries[e] = (cyclic, cyclic if weight(e) >= 2 else trivial)
    return EPartTable(entries)


def is_subquotient_chain(small, large):
    """True when the invariant chain of small fits inside that of large.

    For finite abelian groups this is equivalent to small being a subgroup
    (and a quotient) of large: after aligning the chains from the top, every
    factor of small divides the matching factor of large.
    """
    a, b = small.reduced, large.reduced
    if len(a) > len(b):
        return False
    return all(y % x == 0 for x, y in zip(reversed(a), reversed(b)))


def torsion_summary(modulus, extra_inverted=(), ells=()):
    """Everything the ``torsion`` subcommand prints, as plain data."""
    summary = {
        "modulus": str(modulus),
        "setting": str(modulus.setting),
        "constants": {"k": modulus.constants.k, "b": modulus.constants.b, "a": modulus.constants.a},
        "d": {format_character(e): d_of_char(modulus, e) for e in characters(modulus.s)},
        "jacobian_torsion": jacobian_torsion(modulus, extra_inverted).to_dict(),
        "gen_jacobian_torsion": gen_jacobian_torsion(modulus, extra_inverted).to_dict(),
        "mu_torsion_rank": mu_torsion_rank(modulus),
        "epart_table": epart_table(modulus, extra_inverted).to_dict(),
    }
    if modulus.s == 1:
        summary["prime_level_order"] = prime_level_torsion_order(modulus)
        if not modulus.setting.is_nf:
            stated = stated_ff_prime_order(modulus)
            summary["stated_formula_order"] = str(stated)
            summary["stated_formula_agrees"] = stated == summary["prime_level_order"]
    ell_parts = {}
    for ell in ells:
        try:
            table = cuspidal_ell_table(modulus, ell)
            ell_parts[str(ell)] = {format_character(e): v for e, v in table.items()}
        except ExcludedCaseError as exc:
            logger.info("ell = %d excluded: %s", ell, exc)
            ell_parts[str(ell)] = None
    summary["ell_parts"] = ell_parts
    m2_prime = {}
    for ell in ells:
        try:
            m2_prime[str(ell)] = gen_jacobian_ell_part(modulus, ell).to_dict()
        except ExcludedCaseError:
            m2_prime[str(ell)] = None
    summary["gen_jacobian_ell_parts"] = m2_prime
    return summary


def default_ells(modulus, bound=13):
    """Odd primes up to bound together with the odd primes dividing some d(e)."""
    ells = {p for p in range(3, bound + 1, 2) if isprime(p)}
    for e in characters(modulus.s):
        ells.update(p for p in primefactors(d_of_char(modulus, e)) if p % 2)
    return sorted(ells)
