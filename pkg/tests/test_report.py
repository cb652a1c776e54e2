import json

import pytest

from app.errors import UsageError
from app.models.report import CheckReport, CheckStatus
from app.services.report_service import emit_report, exit_code

FIELDS = {
    "check_id",
    "paper_ref",
    "statement",
    "manifold",
    "max_abs_residual",
    "tolerance",
    "points",
    "seed",
    "pass",
    "status",
    "witness",
}


def _report(check_id="f82-structure-axioms", residual=1e-12, status=CheckStatus.PASS) -> CheckReport:
    return CheckReport(
        check_id=check_id,
        paper_ref="Eq. f82",
        statement="φ² = I − η⊗ξ",
        manifold="flat-pac",
        max_abs_residual=None if status == CheckStatus.SKIPPED else residual,
        tolerance=1e-7,
        points=64,
        seed=42,
        passed=status == CheckStatus.PASS,
        status=status,
    )


def test_empty_json_is_an_empty_array():
    assert emit_report([], "json") == "[]"


def test_single_passing_report():
    rows = json.loads(emit_report([_report()], "json"))
    assert len(rows) == 1
    assert set(rows[0]) == FIELDS
    assert rows[0]["pass"] is True
    assert rows[0]["status"] == "pass"


def test_text_rows_flag_failures():
    reports = [
        _report("a-check"),
        _report("b-check", residual=0.5, status=CheckStatus.FAIL),
        _report("c-check", status=CheckStatus.SKIPPED),
    ]
    lines = emit_report(reports, "text").splitlines()
    assert lines[0].startswith("ok")
    assert lines[1].startswith("FAIL")
    assert lines[2].startswith("skip")
    assert len({line.index("flat-pac") for line in lines}) == 1


def test_unknown_format():
    with pytest.raises(UsageError):
        emit_report([], "yaml")


def test_exit_code_ignores_skipped_checks():
    assert exit_code([_report(), _report(status=CheckStatus.SKIPPED)]) == 0
    assert exit_code([_report(status=CheckStatus.FAIL)]) == 1


def test_skipped_rows_report_pass_false():
    rows = json.loads(emit_report([_report(status=CheckStatus.SKIPPED)], "json"))
    assert rows[0]["pass"] is False
    assert rows[0]["status"] == "skipped"
    assert rows[0]["max_abs_residual"] is None


def test_text_rows_carry_the_reference():
    line = emit_report([_report()], "text")
    assert "Eq. f82" in line
    assert line.endswith("φ² = I − η⊗ξ")
