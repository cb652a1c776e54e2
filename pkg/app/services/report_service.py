"""Rendering of check reports for stdout."""

import json
from enum import Enum
from typing import List, Sequence

from app.errors import UsageError
from app.models.report import CheckReport, CheckStatus


class ReportFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


_LABELS = {
    CheckStatus.PASS: "ok",
    CheckStatus.FAIL: "FAIL",
    CheckStatus.SKIPPED: "skip",
}


def _residual(report: CheckReport) -> str:
    return "-" if report.max_abs_residual is None else f"{report.max_abs_residual:.3e}"


def emit_report(reports: Sequence[CheckReport], fmt: str) -> str:
    """Render ``reports`` as a JSON array or as aligned text columns"""
    try:
        fmt = ReportFormat(fmt)
    except ValueError:
        raise UsageError(f"unknown format {fmt!r}") from None

    if fmt == ReportFormat.JSON:
        rows = [report.model_dump(mode="json", by_alias=True) for report in reports]
        return json.dumps(rows, indent=2, ensure_ascii=False)

    columns: List[List[str]] = [
        [_LABELS[r.status], r.check_id, r.manifold, _residual(r), f"{r.tolerance:.1e}", r.paper_ref, r.statement]
        for r in reports
    ]
    if not columns:
        return ""
    widths = [max(len(row[i]) for row in columns) for i in range(6)]
    lines = []
    for row in columns:
        cells = [cell.ljust(width) for cell, width in zip(row, widths)]
        lines.append("  ".join(cells + [row[6]]))
    return "\n".join(lines)


def exit_code(reports: Sequence[CheckReport]) -> int:
    """0 when every non-skipped check passed, 1 otherwise"""
    return 1 if any(r.status == CheckStatus.FAIL for r in reports) else 0
