"""End-to-end acceptance runs of the verification suites.

Every suite runs at its default bounds; the eta and hecke sweeps are the
slow ones.
"""

import json

from cuspidal_torsion import report as rendering
from cuspidal_torsion.base_ring import Modulus, PrimeElt, Setting
from cuspidal_torsion.hecke import eisenstein_report, two_torsion_obstruction
from cuspidal_torsion.verify import (
    SUITES,
    Check,
    VerificationReport,
    ell_checks,
    eta_checks,
    hecke_checks,
    matrix_checks,
    prime_level_checks,
    run_suites,
    structure_checks,
)


def assert_all_pass(checks):
    checks = list(checks)
    assert checks
    failed = [f"{c.suite}: {c.name} {c.detail}" for c in checks if not c.passed]
    assert not failed, failed


def test_prime_level_orders():
    assert_all_pass(prime_level_checks())


def test_pairing_matrix_and_lattices():
    assert_all_pass(matrix_checks(4))


def test_discriminant_quotients_up_to_sixty():
    assert_all_pass(eta_checks(60))


def test_structure_of_torsion_and_delta():
    assert_all_pass(structure_checks(60, ff_qs=(2, 3), ff_max_degree=3))


def test_hecke_sweep():
    assert_all_pass(hecke_checks())


def test_obstruction_for_105_with_full_sample():
    modulus = Modulus.nf(3, 5, 7)
    two = PrimeElt(Setting.nf(), 2)
    (row,) = eisenstein_report(modulus, [two], samples=1000, seed=0)
    assert row.divisor_action
    assert row.d3_eisenstein
    assert row.l0_exponent_two
    assert not row.ctilde_eisenstein
    assert two_torsion_obstruction(modulus, two).nonzero


def test_ell_parts_for_77_and_91():
    assert_all_pass(ell_checks())


def test_run_suites_counts_every_selected_suite():
    report = run_suites(("matrix", "ell"), {"smax": 2})
    assert report.ok
    assert list(report.counts()) == ["matrix", "ell"]
    assert set(report.counts()) <= set(SUITES)


def test_verification_report_survives_json():
    result = run_suites(("matrix",), {"smax": 2})
    result.checks.append(Check("ell", "N=77 injected", False, "1 vs 5"))
    data = json.loads(rendering.to_json(result.to_dict(include_checks=True)))
    restored = VerificationReport.from_dict(data)
    assert restored == result
    assert restored.counts() == result.counts()
    assert data["status"] == "FAIL"


def test_verification_report_from_failures_only():
    result = VerificationReport([Check("hecke", "p=3", True), Check("hecke", "p=5", False)], incomplete=True)
    restored = VerificationReport.from_dict(json.loads(rendering.to_json(result.to_dict())))
    assert restored.checks == [Check("hecke", "p=5", False)]
    assert restored.incomplete
    assert restored.to_dict()["status"] == "INCOMPLETE"
