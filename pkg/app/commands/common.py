"""Helpers shared by the subcommands."""

import functools
import logging
from collections.abc import Callable
from typing import ParamSpec, TypeVar

import click
from pydantic import BaseModel

from app.core.errors import CartanError, ExportError
from app.models.superalgebra import AlgebraParams
from app.schemas.run import RunConfig
from app.services.derivations import critical_degrees

logger = logging.getLogger(__name__)

P = ParamSpec("P")
R = TypeVar("R")


def guarded(command: Callable[P, R]) -> Callable[P, R]:
    """Report engine errors on stderr and exit with their code."""

    @functools.wraps(command)
    def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
        try:
            return command(*args, **kwargs)
        except CartanError as exc:
            logger.debug("command failed", exc_info=True)
            click.echo(f"error: {exc.detail}", err=True)
            raise SystemExit(exc.exit_code) from exc

    return wrapper


def emit(config: RunConfig, lines: list[str], document: BaseModel) -> None:
    """Print the text report; with --out also write the JSON document."""
    for line in lines:
        click.echo(line)
    if config.out is not None:
        try:
            config.out.write_text(document.model_dump_json(indent=2) + "\n", encoding="utf-8")
        except OSError as exc:
            raise ExportError(f"cannot write {config.out}: {exc.strerror}") from exc


def verdict(passed: bool) -> str:
    return "PASS" if passed else "FAIL"


def parse_degrees(value: str | None, params: AlgebraParams) -> list[int] | None:
    """``critical`` or a comma-separated list of degrees, e.g. ``-25,-5,0``."""
    if value is None:
        return None
    if value.strip() == "critical":
        return critical_degrees(params)
    try:
        degrees = sorted({int(part) for part in value.split(",") if part.strip()})
    except ValueError as exc:
        raise click.BadParameter(
            "expected 'critical' or comma-separated integers", param_hint="--degrees"
        ) from exc
    if not degrees:
        raise click.BadParameter("no degrees given", param_hint="--degrees")
    return degrees
