import math
from typing import List, Optional

from app.config import settings
from app.errors import UsageError
from app.logger import get_logger
from app.models.report import CheckReport, CheckStatus
from app.services.check_registry import Check, CheckContext, CheckSkipped, Suite, checks_for
from app.utils.sampling import default_tolerance
from app.zoo.registry import get_entry

logger = get_logger("suites")


class SuiteService:
    def __init__(self, points: Optional[int] = None, seed: Optional[int] = None):
        self.points = settings.default_points if points is None else points
        self.seed = settings.default_seed if seed is None else seed

    def run_suite(self, manifold: str, suite: str, tol: Optional[float] = None) -> List[CheckReport]:
        """
        Run every check of a suite against one zoo entry

        Returns:
            One report per registered check, ordered by check id; checks whose
            preconditions fail are reported as skipped

        Raises:
            UsageError: unknown suite or non-positive point count
            UnknownEntryError: unknown manifold
        """

        # 1. Resolve inputs
        try:
            suite_id = Suite(suite)
        except ValueError:
            raise UsageError(f"unknown suite {suite!r}; known: {', '.join(s.value for s in Suite)}") from None
        if self.points <= 0:
            raise UsageError(f"points must be positive, got {self.points}")

        entry = get_entry(manifold)
        tol = default_tolerance(entry.manifold) if tol is None else tol

        # 2. Run the checks in id order
        ctx = CheckContext(entry, self.points, self.seed, tol)
        checks = checks_for(suite_id)
        logger.info("running %d %s checks on %s (points=%d, seed=%d, tol=%g)",
                    len(checks), suite_id.value, entry.id, self.points, self.seed, tol)
        reports = [self.run_check(check, ctx) for check in checks]

        # 3. Summarize
        failed = sum(r.status == CheckStatus.FAIL for r in reports)
        skipped = sum(r.status == CheckStatus.SKIPPED for r in reports)
        logger.info("%s on %s: %d passed, %d failed, %d skipped",
                    suite_id.value, entry.id, len(reports) - failed - skipped, failed, skipped)
        return reports

    def run_check(self, check: Check, ctx: CheckContext) -> CheckReport:
        tolerance = check.tolerance(ctx.tol)
        base = dict(
            check_id=check.id,
            paper_ref=check.paper_ref,
            statement=check.statement,
            manifold=ctx.entry.id,
            tolerance=tolerance,
            points=ctx.count,
            seed=ctx.seed,
            witness=check.witness,
        )

        reason = check.applies(ctx.entry)
        if reason is not None:
            logger.debug("%s skipped: %s", check.id, reason)
            return CheckReport(status=CheckStatus.SKIPPED, **base)

        try:
            residual = float(check.run(ctx, ctx.rng(check.id)))
        except CheckSkipped as exc:
            logger.debug("%s skipped: %s", check.id, exc)
            return CheckReport(status=CheckStatus.SKIPPED, **base)
        except Exception as exc:
            if check.expect is not None and isinstance(exc, check.expect):
                logger.debug("%s raised the expected %s", check.id, type(exc).__name__)
                return CheckReport(max_abs_residual=0.0, passed=True, status=CheckStatus.PASS, **base)
            logger.warning("%s raised %s: %s", check.id, type(exc).__name__, exc)
            return CheckReport(passed=False, status=CheckStatus.FAIL, **base)

        if check.expect is not None:
            logger.debug("%s did not raise %s", check.id, check.expect.__name__)
            residual = 1.0
            passed = False
        elif check.witness:
            passed = math.isfinite(residual) and residual >= tolerance
        else:
            passed = residual < tolerance

        logger.debug("%s: residual %.3e (tolerance %.1e)", check.id, residual, tolerance)
        return CheckReport(
            max_abs_residual=residual,
            passed=passed,
            status=CheckStatus.PASS if passed else CheckStatus.FAIL,
            **base,
        )
