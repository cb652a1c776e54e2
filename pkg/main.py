import click

from app.commands.catalog import describe, list_command
from app.commands.transform import transform
from app.commands.verify import verify
from app.config import settings
from app.logger import set_level


@click.group()
@click.option("--log-level", default=settings.log_level, show_default=True,
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
              help="Diagnostics on stderr")
def cli(log_level: str):
    """Numerical verification of almost paracontact metric identities"""
    set_level(log_level)


cli.add_command(verify)
cli.add_command(list_command)
cli.add_command(describe)
cli.add_command(transform)


if __name__ == "__main__":
    cli()
