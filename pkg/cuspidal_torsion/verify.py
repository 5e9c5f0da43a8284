"""Verification suites: closed forms checked against independent computations.

Each suite is a generator of :class:`Check` results so that a run can be cut
short by a time limit and still report what it saw.
"""

import itertools
import logging
import random
import time
from dataclasses import dataclass, field
from math import gcd
from typing import List

from sympy import Matrix, ZZ, factorint, multiplicity, primerange
from sympy.matrices.normalforms import invariant_factors

from .base_ring import Modulus, Setting, e_H, irreducible_polys
from .cusps import (
    CuspDivisor,
    atkin_lehner,
    basis_vector,
    characters,
    coker_D2_to_D3,
    cusp_elements,
    dp2_basis,
    eigendivisor,
    format_character,
    identity_character,
    index_closed_form,
    lattice_index_D2_D1,
    pairing,
    pairing_det_closed_form,
    pairing_matrix,
    recursive_pairing_matrix,
    sum_of_eigendivisors,
    unit_index,
    weight,
)
from .delta import (
    basis_order,
    c_constant,
    delta_basis_element,
    delta_cokernel,
    delta_image_De,
    delta_of,
    delta_order_De,
    kernel_generators,
    kernel_subgroup,
    transformation_constant,
)
from .errors import CuspidalError
from .eta import check_character, cuspidal_group_oracle, ligozat_orders, eta_quotient_of_char
from .groups import LocalizedAbelianGroup, ell_part
from .hecke import (
    commute_holds,
    d3_eisenstein_holds,
    divisor_action_holds,
    exponent_two_holds,
    hecke_primes,
    random_l0_batch,
    two_torsion_obstruction,
)
from .smith import smith_normal_form
from .torsion import (
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
    m2_prime_characters,
    prime_level_torsion_order,
)

logger = logging.getLogger(__name__)

SUITES = ("prime_level", "matrix", "eta", "structure", "hecke", "ell")


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self):
        return {"suite": self.suite, "name": self.name, "passed": self.passed, "detail": self.detail}

    @classmethod
    def from_dict(cls, data):
        return cls(data["suite"], data["name"], bool(data["passed"]), data.get("detail", ""))


@dataclass
class VerificationReport:
    checks: List[Check] = field(default_factory=list)
    incomplete: bool = False

    @property
    def failures(self):
        return [c for c in self.checks if not c.passed]

    @property
    def ok(self):
        return not self.failures and not self.incomplete

    def counts(self):
        """Per-suite (passed, failed) counts in suite order."""
        totals = {}
        for c in self.checks:
            passed, failed = totals.get(c.suite, (0, 0))
            totals[c.suite] = (passed + c.passed, failed + (not c.passed))
        return totals

    def to_dict(self, include_checks=False):
        data = {
            "status": "INCOMPLETE" if self.incomplete else ("PASS" if self.ok else "FAIL"),
            "counts": {suite: {"passed": p, "failed": f} for suite, (p, f) in self.counts().items()},
            "failures": [c.to_dict() for c in self.failures],
        }
        if include_checks:
            data["checks"] = [c.to_dict() for c in self.checks]
        return data

    @classmethod
    def from_dict(cls, data):
        """Rebuild a report from :meth:`to_dict` output.

        Without a "checks" entry only the failures are recovered, which keeps
        the status but not the passed counts.
        """
        entries = data["checks"] if "checks" in data else data["failures"]
        return cls([Check.from_dict(entry) for entry in entries], data["status"] == "INCOMPLETE")


def squarefree_levels(nmax):
    """Squarefree N with 2 <= N <= nmax."""
    return [n for n in range(2, nmax + 1) if all(e == 1 for e in factorint(n).values())]


def ff_moduli(q, max_degree):
    """Every squarefree monic N over GF(q) with 1 <= deg N <= max_degree."""
    irreducibles = [p for d in range(1, max_degree + 1) for p in irreducible_polys(q, d)]
    setting = Setting.ff(q)
    moduli = []
    for size in range(1, max_degree + 1):
        for combo in itertools.combinations(irreducibles, size):
            if sum(p.degree for p in combo) <= max_degree:
                moduli.append(Modulus(setting, combo))
    return moduli


def nf_moduli(nmax):
    return [Modulus.nf(*sorted(factorint(n))) for n in squarefree_levels(nmax)]


def _moduli_for_s(s):
    return Modulus.nf(*list(primerange(5, 100))[:s])


def prime_level_checks(nf_bound=200, ff_qs=(2, 3, 4), ff_max_degree=4):
    """Prime-level orders: closed form, delta order and the s = 1 consistency."""
    for p in primerange(2, nf_bound):
        modulus = Modulus.nf(p)
        order = prime_level_torsion_order(modulus)
        expected = (p - 1) // gcd(12, p - 1)
        delta = delta_order_De(modulus, (-1,))
        stripped = LocalizedAbelianGroup.cyclic(order, {2, 3})
        yield Check(
            "prime_level",
            f"NF N={p}",
            order == expected == delta and stripped == jacobian_torsion(modulus),
            f"order {order}, expected {expected}, delta {delta}",
        )
    for q in ff_qs:
        for degree in range(1, ff_max_degree + 1):
            for prime in irreducible_polys(q, degree):
                modulus = Modulus(Setting.ff(q), (prime,))
                size = q**degree
                order = prime_level_torsion_order(modulus)
                expected = (size - 1) // gcd(q * q - 1, size - 1)
                d = d_of_char(modulus, (-1,))
                delta = delta_order_De(modulus, (-1,))
                yield Check(
                    "prime_level",
                    f"FF q={q} N={prime}",
                    order == expected and delta == d // gcd(d, q * q - 1),
                    f"order {order}, expected {expected}, delta {delta}",
                )


def matrix_checks(smax=4):
    """Pairing determinant, lattice index, cokernel order and eigendivisor identities."""
    for s in range(1, smax + 1):
        matrix, det = pairing_matrix(s)
        yield Check("matrix", f"|det A_{s}|", det == pairing_det_closed_form(s), f"{det}")
        yield Check(
            "matrix",
            f"A_{s} recursive",
            bool((recursive_pairing_matrix(s) == matrix).all()),
        )
        snf = smith_normal_form(matrix, check=True)
        reference = invariant_factors(Matrix(matrix.tolist()), domain=ZZ)
        yield Check(
            "matrix",
            f"SNF A_{s} vs sympy",
            tuple(int(x) for x in reference) == snf.invariant_factors,
            f"{snf.diagonal}",
        )
        modulus = _moduli_for_s(s)
        index = lattice_index_D2_D1(modulus)
        yield Check("matrix", f"[D2:D1] s={s}", index == index_closed_form(s), f"{index}")
        coker = coker_D2_to_D3(modulus)
        yield Check("matrix", f"coker D2->D3 s={s}", coker.full_order == 2**s, f"{coker}")
        translations_ok = all(
            atkin_lehner(w, eigendivisor(s, e)) == pairing(e, w) * eigendivisor(s, e)
            for w in cusp_elements(s)
            for e in characters(s)
        )
        yield Check("matrix", f"Atkin-Lehner eigenvalues s={s}", translations_ok)
        zero = CuspDivisor.cusp(s, (0,) * s)
        sums_ok = all(
            sum_of_eigendivisors(s, i)
            == 2 ** (s - 1) * (zero - CuspDivisor.cusp(s, basis_vector(s, i)))
            for i in range(1, s + 1)
        )
        yield Check("matrix", f"sum of eigendivisors s={s}", sums_ok)


def eta_checks(nmax=60, truncation=None):
    """Ligozat divisors and series orders at infinity for every squarefree N <= nmax."""
    for modulus in nf_moduli(nmax):
        for e in characters(modulus.s):
            if e == identity_character(modulus.s):
                continue
            result = check_character(modulus, e, truncation)
            degree = ligozat_orders(modulus, eta_quotient_of_char(modulus, e)).degree
            yield Check(
                "eta",
                f"N={modulus.level_norm} e={format_character(e)}",
                result.passed and degree == 0,
                f"ord_inf {result.infinity_order} vs {result.infinity_expected}",
            )
        oracle = cuspidal_group_oracle(modulus)
        yield Check(
            "eta",
            f"N={modulus.level_norm} oracle SNF",
            oracle == jacobian_torsion(modulus),
            f"{oracle}",
        )


def _delta_checks(modulus):
    """Delta-map invariants for one modulus; returns a list of (name, passed)."""
    s = modulus.s
    results = []
    for e in characters(s):
        if e == identity_character(s):
            continue
        i = unit_index(e)
        order = delta_order_De(modulus, e)
        image = delta_of(modulus, eigendivisor(s, e))
        if i is None:
            results.append((f"delta(D^e) = 0 for weight {weight(e)}", image.is_zero() and order == 1))
            continue
        direct = delta_image_De(modulus, i)
        basis, _ = delta_basis_element(modulus, i, (0,) * s)
        results.append((f"order delta(D^e({i}))", direct.order == order))
        results.append((f"delta_of(D^e({i})) matches", image == direct))
        results.append((f"2^(s-1) relation i={i}", 2 ** (s - 1) * basis == direct))
        w_all = (1,) * s
        results.append((
            f"c constant i={i}",
            {p: abs(n) for p, n in c_constant(modulus, e, w_all).exponents}
            == {p: abs(n) for p, n in transformation_constant(modulus, e, w_all).exponents},
        ))
    for (i, w), b in dp2_basis(modulus):
        image, order = delta_basis_element(modulus, i, w)
        results.append((f"basis order i={i}", order == basis_order(modulus, i) and delta_of(modulus, b) == image))
        for v in cusp_elements(s):
            if delta_of(modulus, atkin_lehner(v, b)) != image.translate(v):
                results.append((f"Atkin-Lehner equivariance i={i}", False))
                break
    results.append(("kernel generators", all(delta_of(modulus, D).is_zero() for D in kernel_generators(modulus))))
    cokernel = delta_cokernel(modulus)
    expected = LocalizedAbelianGroup(tuple(basis_order(modulus, i) for i in range(1, s + 1)))
    results.append(("delta cokernel", cokernel == expected))
    return results


def structure_checks(nmax=60, ff_qs=(2, 3), ff_max_degree=3):
    """Oracle and kernel reconstructions of M_1 and M_2 away from a."""
    moduli = nf_moduli(nmax) + [m for q in ff_qs for m in ff_moduli(q, ff_max_degree)]
    for modulus in moduli:
        label = f"{modulus.setting} N={modulus}"
        if modulus.setting.is_nf:
            oracle = cuspidal_group_oracle(modulus)
            yield Check("structure", f"{label} oracle = M1", oracle == jacobian_torsion(modulus), f"{oracle}")
        kernel = kernel_subgroup(modulus)
        m2 = gen_jacobian_torsion(modulus)
        yield Check("structure", f"{label} kernel = M2", kernel == m2, f"{kernel} vs {m2}")
        table = epart_table(modulus)
        yield Check("structure", f"{label} e-part table sums to M2", table.total_gen_jacobian() == m2)
        yield Check("structure", f"{label} M2 inside M1", is_subquotient_chain(M_j(modulus, 2), M_j(modulus, 1)))
        yield Check(
            "structure",
            f"{label} d(e) two paths",
            all(d_of_char(modulus, e) == d_of_char_from_primes(modulus, e) for e in characters(modulus.s)),
        )
        if not modulus.setting.is_nf or all(p.value != 3 for p in modulus.primes):
            yield Check("structure", f"{label} e_H divisibility", e_h_divisibility_holds(modulus))
        for name, passed in _delta_checks(modulus):
            yield Check("structure", f"{label} {name}", passed)


def hecke_checks(nmax=60, ff_qs=(2, 3), ff_max_degree=3, bound=50, samples=1000, seed=0):
    """Eisenstein properties for every modulus and Hecke prime up to bound.

    The randomized L^0 set of each modulus is drawn once and checked for every
    prime as an :class:`~cuspidal_torsion.hecke.LBatch`.
    """
    moduli = nf_moduli(nmax) + [m for q in ff_qs for m in ff_moduli(q, ff_max_degree)]
    for modulus in moduli:
        primes = hecke_primes(modulus, bound)
        rng = random.Random(seed)
        pool = list(modulus.primes) + primes
        sample_set = random_l0_batch(modulus, rng, pool, samples)
        label = f"{modulus.setting} N={modulus}"
        logger.debug("Hecke sweep for %s over %d primes", label, len(primes))
        for p in primes:
            yield Check(
                "hecke",
                f"{label} p={p}",
                divisor_action_holds(modulus, p)
                and d3_eisenstein_holds(modulus, p)
                and exponent_two_holds(modulus, p, sample_set),
            )
        if len(primes) >= 2 and len(sample_set):
            p1, p2 = primes[0], primes[1]
            yield Check(
                "hecke",
                f"{label} tau_{p1} tau_{p2} commute",
                commute_holds(modulus, p1, p2, sample_set.head(50)),
            )
        if modulus.setting.is_nf and modulus.s <= 2 and all(p.value != 2 for p in modulus.primes):
            verdict = two_torsion_obstruction(modulus, hecke_primes(modulus, 2)[0])
            yield Check("hecke", f"{label} obstruction vanishes", not verdict.nonzero)
    n105 = Modulus.nf(3, 5, 7)
    two = hecke_primes(n105, 2)[0]
    verdict = two_torsion_obstruction(n105, two)
    yield Check("hecke", "N=105 obstruction nonzero", verdict.nonzero)
    batch = random_l0_batch(n105, random.Random(seed), list(n105.primes) + [two], samples)
    yield Check("hecke", "N=105 exponent two", exponent_two_holds(n105, two, batch))


def ell_checks(levels=(77, 91), ells=(5, 7, 11, 13)):
    """ell-part tables and the 3-part of J~ for N coprime to 6."""
    for n in levels:
        modulus = Modulus.nf(*sorted(factorint(n)))
        e_h = e_H(modulus)
        for ell in ells:
            for e in characters(modulus.s):
                d = d_of_char(modulus, e)
                expected = 1 if e == identity_character(modulus.s) else ell ** multiplicity(ell, d)
                got = cuspidal_ell_part(modulus, ell, e)
                yield Check("ell", f"N={n} ell={ell} e={format_character(e)}", got == expected, f"{got} vs {expected}")
        for e in characters(modulus.s):
            if e == identity_character(modulus.s):
                continue
            d = d_of_char(modulus, e)
            expected = 3 ** multiplicity(3, d) if e == e_h else 3 ** (multiplicity(3, d) - 1)
            yield Check("ell", f"N={n} ell=3 e={format_character(e)}", cuspidal_ell_part(modulus, 3, e) == expected)
        orders = [d_of_char(modulus, e) // 3 for e in m2_prime_characters(modulus)]
        direct = LocalizedAbelianGroup(tuple(orders)).localized_at(3)
        quotients = [
            cuspidal_ell_part(modulus, 3, e) // ell_part(delta_order_De(modulus, e), 3)
            for e in characters(modulus.s)
            if e not in (identity_character(modulus.s), e_h)
        ]
        via_delta = LocalizedAbelianGroup(tuple(quotients)).localized_at(3)
        m2_prime = gen_jacobian_ell_part(modulus, 3)
        yield Check("ell", f"N={n} M2' 3-part", m2_prime == direct == via_delta, f"{m2_prime}")


def run_suites(selected, config, time_limit=None):
    """Run the selected suites in order, stopping at the time limit.

    Args:
        selected: suite names from :data:`SUITES`
        config: mapping of suite options (nmax, smax, samples, seed, truncation)
        time_limit: seconds, or None for no limit

    Returns:
        VerificationReport
    """
    factories = {
        "prime_level": lambda: prime_level_checks(),
        "matrix": lambda: matrix_checks(config.get("smax", 4)),
        "eta": lambda: eta_checks(config.get("nmax", 60), config.get("truncation")),
        "structure": lambda: structure_checks(config.get("nmax", 60)),
        "hecke": lambda: hecke_checks(
            config.get("nmax", 60),
            samples=config.get("samples", 1000),
            seed=config.get("seed", 0),
        ),
        "ell": lambda: ell_checks(),
    }
    report = VerificationReport()
    start = time.monotonic()
    for name in selected:
        logger.info("running suite %s", name)
        try:
            for check in factories[name]():
                report.checks.append(check)
                if not check.passed:
                    logger.warning("FAILED %s: %s %s", check.suite, check.name, check.detail)
                if time_limit is not None and time.monotonic() - start > time_limit:
                    report.incomplete = True
                    logger.warning("time limit of %ss reached during %s", time_limit, name)
                    return report
        except CuspidalError as exc:
            report.checks.append(Check(name, "suite error", False, str(exc)))
    return report


def modulus_checks(modulus, config):
    """Checks for a single modulus (``verify --level``)."""
    report = VerificationReport()
    for name, passed in _delta_checks(modulus):
        report.checks.append(Check("structure", name, passed))
    report.checks.append(Check("structure", "kernel = M2", kernel_subgroup(modulus) == gen_jacobian_torsion(modulus)))
    if modulus.setting.is_nf:
        report.checks.append(
            Check("structure", "oracle = M1", cuspidal_group_oracle(modulus) == jacobian_torsion(modulus))
        )
        for e in characters(modulus.s):
            if e != identity_character(modulus.s):
                result = check_character(modulus, e, config.get("truncation"))
                report.checks.append(Check("eta", f"e={format_character(e)}", result.passed))
    return report

