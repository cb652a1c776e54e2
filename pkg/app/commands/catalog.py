import click

from app.zoo.registry import get_entry, list_entries


@click.command("list")
def list_command():
    """Print the zoo entry ids, one per line"""
    for entry_id in list_entries():
        click.echo(entry_id)


@click.command()
@click.option("--manifold", required=True, type=click.Choice(list_entries()), help="Zoo entry id")
def describe(manifold: str):
    """Print an entry's metadata, expected flags and notes"""
    entry = get_entry(manifold)
    m = entry.manifold

    click.echo(f"id:        {entry.id}")
    click.echo(f"dimension: {m.dim} (n = {m.n})")
    click.echo(f"backend:   {m.backend.value}")
    if entry.frame_twin:
        click.echo(f"twin:      {entry.frame_twin}")
    click.echo("expected:")
    for flag, value in entry.expected.items():
        click.echo(f"  {flag.value:<18} {'yes' if value else 'no'}")
    click.echo(f"notes:     {entry.notes}")
