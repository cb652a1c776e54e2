import click

from app.config import settings
from app.errors import UnknownEntryError, UsageError
from app.services.check_registry import Suite
from app.services.report_service import ReportFormat, emit_report, exit_code
from app.services.suite_service import SuiteService
from app.zoo.registry import list_entries


@click.command()
@click.option("--manifold", required=True, type=click.Choice(list_entries()), help="Zoo entry id")
@click.option("--suite", default=Suite.ALL.value, show_default=True, type=click.Choice([s.value for s in Suite]))
@click.option("--points", default=settings.default_points, show_default=True, type=click.IntRange(min=1))
@click.option("--seed", default=settings.default_seed, show_default=True, type=int)
@click.option("--tol", default=None, type=click.FloatRange(min=0.0, min_open=True),
              help="Residual tolerance [default: 1e-10 on frames, 1e-7 on charts]")
@click.option("--format", "fmt", default=ReportFormat.TEXT.value, show_default=True,
              type=click.Choice([f.value for f in ReportFormat]))
@click.pass_context
def verify(ctx: click.Context, manifold: str, suite: str, points: int, seed: int, tol, fmt: str):
    """Run an identity suite against a zoo entry"""
    service = SuiteService(points=points, seed=seed)

    try:
        reports = service.run_suite(manifold, suite, tol)
    except (UsageError, UnknownEntryError) as e:
        raise click.UsageError(str(e))

    click.echo(emit_report(reports, fmt))
    ctx.exit(exit_code(reports))
