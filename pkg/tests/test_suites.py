import pytest

from app.errors import NotKillingError, UnknownEntryError, UsageError
from app.models.report import CheckStatus
from app.services.check_registry import Suite, checks_for, get_check
from app.services.suite_service import SuiteService


def _by_id(reports):
    return {r.check_id: r for r in reports}


def test_every_suite_registers_checks():
    everything = checks_for(Suite.ALL)
    assert len({c.id for c in everything}) == len(everything)
    for suite in (Suite.AXIOMS, Suite.CURVATURE, Suite.CONNECTIONS, Suite.TRANSFORMS):
        assert checks_for(suite)
    assert [c.id for c in everything] == sorted(c.id for c in everything)


def test_check_ids_lead_with_their_reference():
    for check in checks_for(Suite.ALL):
        assert check.paper_ref
        tag = check.id.split("-", 1)[0]
        assert tag in check.paper_ref.replace("§", "s"), check.id


def test_unknown_check_id():
    with pytest.raises(UsageError):
        get_check("no-such-check")


def test_flat_axioms_pass():
    reports = SuiteService(points=8).run_suite("flat-pac", "axioms")
    assert reports
    assert all(r.status != CheckStatus.FAIL for r in reports)
    assert _by_id(reports)["s2-compatible-metric-euclidean-rejected"].status == CheckStatus.PASS


def test_skipped_checks_are_reported():
    reports = _by_id(SuiteService(points=4).run_suite("solv-para", "transforms"))
    skipped = reports["f53-homothety-ricci"]
    assert skipped.status == CheckStatus.SKIPPED
    assert skipped.max_abs_residual is None
    assert skipped.passed is False


def test_expected_rejection_counts_as_pass():
    assert get_check("t10-skew-connection").expect is NotKillingError
    reports = _by_id(SuiteService(points=4).run_suite("solv-para", "connections"))
    report = reports["t10-skew-connection"]
    assert report.status == CheckStatus.PASS
    assert report.max_abs_residual == 0.0


def test_einsteinize_on_sl2():
    reports = _by_id(SuiteService(points=4).run_suite("sl2-para", "transforms"))
    assert reports["t12-einsteinize-einstein"].status == CheckStatus.PASS
    assert reports["t12-einsteinize-after-homothety"].status == CheckStatus.PASS
    assert reports["t12-einsteinize-degenerate-scale"].status == CheckStatus.SKIPPED


def test_degenerate_scale_on_heisenberg_frame():
    reports = _by_id(SuiteService(points=4).run_suite("heis-para-frame", "transforms"))
    assert reports["t12-einsteinize-einstein"].status == CheckStatus.SKIPPED
    assert reports["t12-einsteinize-degenerate-scale"].status == CheckStatus.PASS


def test_witness_checks_pass_on_large_residuals():
    reports = _by_id(SuiteService(points=4).run_suite("solv-para", "axioms"))
    report = reports["t4-parasasakian-nabla-phi-witness"]
    assert report.witness
    assert report.status == CheckStatus.PASS
    assert report.max_abs_residual >= report.tolerance


def test_runs_are_deterministic():
    first = SuiteService(points=4, seed=5).run_suite("sl2-para", "curvature")
    second = SuiteService(points=4, seed=5).run_suite("sl2-para", "curvature")
    assert [r.model_dump() for r in first] == [r.model_dump() for r in second]


def test_tolerance_override():
    reports = SuiteService(points=2).run_suite("sl2-para", "axioms", tol=1e-6)
    assert _by_id(reports)["f82-structure-axioms"].tolerance == 1e-6


def test_unknown_suite():
    with pytest.raises(UsageError):
        SuiteService().run_suite("flat-pac", "everything")


def test_unknown_manifold():
    with pytest.raises(UnknownEntryError):
        SuiteService().run_suite("sphere", "axioms")
