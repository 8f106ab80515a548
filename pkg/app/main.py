"""Command-line entry point."""

from pathlib import Path

import click
from pydantic import ValidationError

from app.commands import derive, dims, export, verify
from app.core.config import settings
from app.core.logging import configure_logging, level_for_verbosity
from app.schemas.run import RunConfig


def _first_error(exc: ValidationError) -> str:
    message = exc.errors()[0]["msg"]
    return message.removeprefix("Value error, ")


@click.group(help="Exact computations in the Lie superalgebras O, W and HO over F_p.")
@click.option("--n", "n", type=int, default=3, show_default=True, help="Number of even variables.")
@click.option(
    "--p", "p", type=int, default=5, show_default=True, help="Characteristic, a prime > 3."
)
@click.option("--t", "t", default="1,1,1", show_default=True, help="Comma-separated t_1,...,t_n.")
@click.option("--seed", type=int, default=None, help="Seed for sampled checks.")
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Write the report (or export) to this file.",
)
@click.option("-v", "--verbose", count=True, help="Log progress to stderr; repeat for debug.")
@click.version_option(settings.VERSION, prog_name=settings.PROJECT_NAME)
@click.pass_context
def cli(
    ctx: click.Context,
    n: int,
    p: int,
    t: str,
    seed: int | None,
    out: Path | None,
    verbose: int,
) -> None:
    values = {"n": n, "p": p, "t": t, "out": out, "verbosity": verbose}
    if seed is not None:
        values["seed"] = seed
    try:
        config = RunConfig(**values)
    except ValidationError as exc:
        raise click.UsageError(_first_error(exc), ctx=ctx) from exc
    configure_logging(level_for_verbosity(verbose, settings.LOG_LEVEL))
    ctx.obj = config


cli.add_command(dims.dims)
cli.add_command(verify.verify)
cli.add_command(derive.derive)
cli.add_command(export.export)


if __name__ == "__main__":
    cli()
