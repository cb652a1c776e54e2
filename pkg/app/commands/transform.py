import click

from app.config import settings
from app.errors import GeometryError, ParameterError, PositivityError, UnknownEntryError, UsageError
from app.models.transform import SigmaPreset
from app.services.transform_service import TransformService
from app.zoo.registry import list_entries


@click.command()
@click.option("--manifold", required=True, type=click.Choice(list_entries()), help="Zoo entry id")
@click.option("--alpha", type=float, default=None, help="D-homothety parameter")
@click.option("--sigma", type=click.Choice([p.value for p in SigmaPreset]), default=None, help="Gauge preset")
@click.option("--epsilon", type=float, default=None, help=f"Preset amplitude [default: {settings.sigma_epsilon}]")
@click.option("--points", default=settings.default_points, show_default=True, type=click.IntRange(min=1))
@click.option("--seed", default=settings.default_seed, show_default=True, type=int)
@click.option("--format", "fmt", default="json", show_default=True, type=click.Choice(["json"]))
def transform(manifold: str, alpha, sigma, epsilon, points: int, seed: int, fmt: str):
    """Apply a D-homothety or a gauge transformation and report the result"""
    service = TransformService(points=points, seed=seed)

    try:
        report = service.transform(manifold, alpha=alpha, sigma=sigma, epsilon=epsilon)
    except (UsageError, UnknownEntryError, ParameterError, PositivityError) as e:
        raise click.UsageError(str(e))
    except GeometryError as e:
        raise click.ClickException(str(e))

    click.echo(report.model_dump_json(indent=2))
