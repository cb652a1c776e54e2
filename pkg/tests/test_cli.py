import json

import pytest
from click.testing import CliRunner

from app.models.report import CheckReport, CheckStatus
from app.services.suite_service import SuiteService
from main import cli


def test_list():
    result = CliRunner().invoke(cli, ["list"])
    assert result.exit_code == 0
    assert "heis-para" in result.output.splitlines()


def test_describe():
    result = CliRunner().invoke(cli, ["describe", "--manifold", "solv-para"])
    assert result.exit_code == 0
    assert "homogeneous_frame" in result.output
    assert "k_paracontact" in result.output


def test_verify_json():
    result = CliRunner().invoke(
        cli, ["verify", "--manifold", "flat-pac", "--suite", "axioms", "--points", "8", "--format", "json"]
    )
    assert result.exit_code == 0
    rows = json.loads(result.stdout)
    assert rows and all(row["status"] in ("pass", "skipped") for row in rows)


def test_verify_heisenberg_runs_the_w1_gauge_law():
    result = CliRunner().invoke(
        cli, ["verify", "--manifold", "heis-para", "--suite", "all", "--tol", "1e-6", "--format", "json"]
    )
    assert result.exit_code == 0
    rows = {row["check_id"]: row for row in json.loads(result.stdout)}
    assert rows["f61-w1-law"]["paper_ref"] == "Eq. f61"
    assert rows["f61-w1-law"]["pass"] is True


def test_verify_solv_rejects_the_skew_connection():
    result = CliRunner().invoke(
        cli, ["verify", "--manifold", "solv-para", "--suite", "connections", "--tol", "1e-9", "--format", "json"]
    )
    assert result.exit_code == 0
    rows = {row["check_id"]: row for row in json.loads(result.stdout)}
    row = rows["t10-skew-connection"]
    assert set(row) == {
        "check_id", "paper_ref", "statement", "manifold", "max_abs_residual",
        "tolerance", "points", "seed", "pass", "status", "witness",
    }
    assert row["paper_ref"] == "Theorem t10"
    assert row["pass"] is True
    assert row["max_abs_residual"] == 0.0


def test_verify_is_byte_stable():
    args = ["verify", "--manifold", "sl2-para", "--suite", "curvature", "--points", "4", "--format", "json"]
    first = CliRunner().invoke(cli, args)
    second = CliRunner().invoke(cli, args)
    assert first.output == second.output


def test_failing_check_exits_with_1(monkeypatch):
    failing = CheckReport(
        check_id="f82-structure-axioms",
        paper_ref="Eq. f82",
        statement="φ² = I − η⊗ξ",
        manifold="sl2-para",
        max_abs_residual=1.0,
        tolerance=1e-10,
        points=2,
        seed=42,
        passed=False,
        status=CheckStatus.FAIL,
    )
    monkeypatch.setattr(SuiteService, "run_suite", lambda self, manifold, suite, tol=None: [failing])
    result = CliRunner().invoke(cli, ["verify", "--manifold", "sl2-para", "--points", "2"])
    assert result.exit_code == 1
    assert result.stdout.startswith("FAIL")


def test_unknown_manifold_is_a_usage_error():
    result = CliRunner().invoke(cli, ["verify", "--manifold", "sphere"])
    assert result.exit_code == 2


def test_transform_homothety():
    result = CliRunner().invoke(cli, ["transform", "--manifold", "sl2-para", "--alpha", "3", "--points", "2"])
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["kind"] == "d_homothetic"
    assert report["scal_after"] == pytest.approx(2.0 / 3.0)
    assert report["flags_after"] == report["flags_before"]


def test_transform_needs_exactly_one_deformation():
    result = CliRunner().invoke(
        cli, ["transform", "--manifold", "heis-para", "--alpha", "2", "--sigma", "exp-bump"]
    )
    assert result.exit_code == 2


def test_zero_alpha_is_a_usage_error():
    result = CliRunner().invoke(cli, ["transform", "--manifold", "heis-para", "--alpha", "0", "--points", "2"])
    assert result.exit_code == 2
