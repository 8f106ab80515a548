"""export: machine-readable structure constants, bases and derivation bases."""

import click

from app.commands.common import guarded
from app.models.enums import ExportKind
from app.schemas.run import RunConfig
from app.services import export as export_service
from app.services.derivations import der_space
from app.services.verify import build_ho


@click.command("export")
@click.argument("what", type=click.Choice([k.value for k in ExportKind]))
@click.option("--degree", type=int, default=None, help="Degree for basis and der-basis.")
@click.pass_obj
@guarded
def export(config: RunConfig, what: str, degree: int | None) -> None:
    """Write WHAT to --out, or to stdout without it."""
    params = config.params()
    algebra = build_ho(params)
    kind = ExportKind(what)
    if kind == ExportKind.STRUCTURE_CONSTANTS:
        lines = export_service.structure_constant_lines(algebra)
    elif kind == ExportKind.BASIS:
        lines = export_service.basis_lines(algebra, degree)
    else:
        action = algebra.action
        generators = [action.g.coordinates(v) for v in algebra.m_set + algebra.n_set]
        space = der_space(action, -1 if degree is None else degree, generators=generators)
        lines = export_service.der_basis_lines(params, space)
    if config.out is None:
        for line in lines:
            click.echo(line)
    else:
        export_service.write_lines(config.out, lines)
