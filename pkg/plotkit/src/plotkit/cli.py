"""plotkit command line: render one spec or a directory of specs."""

import json
import sys

import click

from .figures import FigureSpec, SchemaVersionError, render, render_batch


@click.group()
def cli():
    """Render pauliconj result files into figures."""


@cli.command(name="render")
@click.option("--spec", "spec_path", required=True, type=click.Path(exists=True))
def cmd_render(spec_path):
    """Render a single figure from a JSON spec."""
    with open(spec_path, encoding="utf-8") as f:
        spec = FigureSpec.from_json(json.load(f))
    click.echo(render(spec))


@cli.command(name="render-all")
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
def cmd_render_all(directory):
    """Render every *.figspec.json in DIRECTORY."""
    for out in render_batch(directory):
        click.echo(out)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except SchemaVersionError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
